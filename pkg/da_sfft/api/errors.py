class ShapeError(ValueError):
    def __init__(self, message: str, *shapes):
        if shapes:
            message = message + " (" + ", ".join(str(list(s)) for s in shapes) + ")"

        super().__init__(message)


class ConfigError(ValueError):
    pass


# Model state is missing, not yet trained, or the model file is unreadable
class StateError(RuntimeError):
    pass


# A parameter that must stay frozen was changed or handed to an optimizer
class FrozenParameterError(RuntimeError):
    pass


class GradientCheckError(AssertionError):
    pass
