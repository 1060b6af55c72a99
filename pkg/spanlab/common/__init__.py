from spanlab.common.constants import *
from spanlab.common.errors import *
from spanlab.common.classes import *
from spanlab.common.graph_core import *
from spanlab.common.toy import *
from spanlab.common.utils import *
