"""Shared error base for everything a user's input can get wrong.

Library code raises subclasses of ToolError for malformed files, unresolvable
references, tampered bundles, and the like.  The command line maps any
ToolError to an input-error exit; anything else is treated as an internal bug.
"""


class ToolError(Exception):
    pass
