from spanlab.upper_bounds.exponents import *
from spanlab.upper_bounds.path_buying import *
from spanlab.upper_bounds.spanners import *
from spanlab.upper_bounds.girth import *
