from frontend.components.parser import SessionAst, SourceSpan, parse_session, print_session
from frontend.components.session import Report, ReportEntry, SessionOptions, execute
