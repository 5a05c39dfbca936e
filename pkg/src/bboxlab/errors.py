"""Exception hierarchy shared across bboxlab."""


class BBoxLabError(Exception):
    """Base class for every error raised by this package."""


class InvalidBox(BBoxLabError, ValueError):
    pass


class MissingParam(BBoxLabError, ValueError):
    """A metric needs a dataset constant (mean size S or NWD constant C) that was not given."""

    def __init__(self, metric, param):
        self.metric = metric
        self.param = param
        super().__init__(f"metric {metric} requires parameter {param!r}")


class NonGenericPoint(BBoxLabError, ValueError):
    """Finite differences are meaningless here: the point sits too close to a kink."""


class DegenerateSample(BBoxLabError, ArithmeticError):
    pass


class ParseError(BBoxLabError, ValueError):
    def __init__(self, message, locator=None):
        self.locator = locator
        if locator is not None:
            message = f"{locator}: {message}"
        super().__init__(message)


class ValidationError(BBoxLabError, ValueError):
    def __init__(self, message, locator=None):
        self.locator = locator
        if locator is not None:
            message = f"{locator}: {message}"
        super().__init__(message)


class EmptyDataset(BBoxLabError, ValueError):
    pass
