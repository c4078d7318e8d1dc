from .base import *  # noqa
from .spectral import *  # noqa
from .rkhs import *  # noqa
from .sir import *  # noqa
from .link import *  # noqa
from .simgen import *  # noqa
from .store import *  # noqa
from .cli import main  # noqa

__version__ = "0.1.0"
