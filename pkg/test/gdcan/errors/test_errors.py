import pytest

import gdcan


@pytest.mark.parametrize('error, category', [(gdcan.errors.ParameterError, 'parameter'),
                                             (gdcan.errors.ConfigError, 'config'),
                                             (gdcan.errors.FormatError, 'format'),
                                             (gdcan.errors.NotMdf4Error, 'not-mdf4'),
                                             (gdcan.errors.UnsupportedLayoutError, 'unsupported-layout'),
                                             (gdcan.errors.CorruptionError, 'corruption'),
                                             (gdcan.errors.DictionaryMismatchError, 'dictionary'),
                                             (gdcan.errors.SpaceExhaustedError, 'space-exhausted')])
def test_error_prefix(error, category):
    e = error('something broke')
    assert str(e) == 'error[%s]: something broke' % category
    assert e.exit_code != 0
    assert isinstance(e, gdcan.errors.GdcanError)

def test_mdf_errors_are_format_errors():
    assert issubclass(gdcan.errors.NotMdf4Error, gdcan.errors.FormatError)
    assert issubclass(gdcan.errors.UnsupportedLayoutError, gdcan.errors.FormatError)
