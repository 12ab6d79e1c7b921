from .config import *
from .exceptions import *
from .grid import *
from .helpers import *
from .model import *
from .results import *
from .solvers import *
