"""Exception hierarchy shared by the policy and source front ends."""


class StaticRBACError(Exception):
    pass


class PolicyError(StaticRBACError):
    pass


class PolicyParseError(PolicyError):
    def __init__(self, message, line, column, token=None):
        self.line = line
        self.column = column
        self.token = token
        where = f"{line}:{column}"
        if token is not None:
            message = f"{message} (at {token!r})"
        super().__init__(f"{where}: {message}")


class PolicySemanticError(PolicyError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"{line}: {message}")


class UnknownRole(PolicyError, KeyError):
    def __str__(self):
        return f"unknown role {self.args[0]!r}"


class SourceError(StaticRBACError):
    pass


class SourceParseError(SourceError):
    def __init__(self, message, path, line, column):
        self.path = path
        self.line = line
        self.column = column
        self.reason = message
        super().__init__(f"{path}:{line}:{column}: {message}")


class SourceErrors(SourceError):
    """Every parse failure collected while loading a program."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


class DuplicateClassError(SourceError):
    def __init__(self, name, paths):
        self.name = name
        self.paths = tuple(paths)
        super().__init__(f"class {name!r} declared in more than one file: "
                         + ", ".join(map(str, self.paths)))


class ClassificationError(StaticRBACError):
    pass


class AmbiguousClassification(ClassificationError):
    pass


class NoSuchRole(ClassificationError):
    pass
