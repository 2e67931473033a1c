"""ACL2 tooling: lexer, parser, linter, indenter, proof sessions, REPL,
property testing, documents with locked regions, and a local IDE service."""

__version__ = "0.1.0"
