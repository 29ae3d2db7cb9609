"""
Library of error categories raised by gdcan.

Every error carries a short machine-parsable category and the exit code
the command line front end returns for it.
"""

class GdcanError(Exception):
    category = 'error'
    exit_code = 1

    def __str__(self):
        return 'error[' + self.category + ']: ' + super().__str__()


class ParameterError(GdcanError, ValueError):
    category = 'parameter'
    exit_code = 2


class ConfigError(GdcanError, ValueError):
    category = 'config'
    exit_code = 2


class FormatError(GdcanError):
    category = 'format'
    exit_code = 3


class NotMdf4Error(FormatError):
    category = 'not-mdf4'
    exit_code = 3


class UnsupportedLayoutError(FormatError):
    category = 'unsupported-layout'
    exit_code = 4


class CorruptionError(GdcanError):
    category = 'corruption'
    exit_code = 5


class DictionaryMismatchError(GdcanError):
    category = 'dictionary'
    exit_code = 6


class SpaceExhaustedError(GdcanError, OverflowError):
    category = 'space-exhausted'
    exit_code = 7
