import math
import os

UNREACHABLE: float = math.inf
"""distance value for vertices that cannot be reached"""

INFINITE: float = math.inf
"""girth of a forest"""

PATH_COUNT_CAP: int = 2**63
"shortest path counts saturate here, only =1 vs >1 ever matters"

MAX_GENERATION_ATTEMPTS: int = int(os.getenv("SPANLAB_MAX_ATTEMPTS", "16"))
"""seeds tried (seed, seed+1, ...) before a generator gives up"""

AUDIT_EXHAUSTIVE_LIMIT: int = 10**5
"""pair count above which certifications switch to sampling"""

AUDIT_SAMPLE_SIZE: int = int(os.getenv("SPANLAB_AUDIT_SAMPLE", "256"))
"""sources (or pairs) sampled once a sweep is no longer exhaustive"""

AUDIT_SOURCE_LIMIT: int = 2000
"""vertex count above which stretch audits sample sources"""

AVGFREE_DP_CUTOFF: int = 2_000_000
"""max (size, sum) states in the l >= 3 average-free check"""

BRUTE_FORCE_MAX_RANGE: int = 24
"""largest floor(p/l) the exhaustive average-free search accepts"""

INCOMPRESSIBILITY_MAX_BITS: int = 14

PROJECTIVE_PLANE_ORDERS: tuple[int, ...] = (2, 3, 4, 5, 7, 8)

UNCLUSTERED: int = -1
"""cluster_of value for vertices no center reached"""
