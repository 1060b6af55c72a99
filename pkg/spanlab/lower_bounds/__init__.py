from spanlab.lower_bounds.avgfree import *
from spanlab.lower_bounds.instances import *
from spanlab.lower_bounds.girth import *
from spanlab.lower_bounds.hopsets import *
from spanlab.lower_bounds.shortcut import *
from spanlab.lower_bounds.io import *
