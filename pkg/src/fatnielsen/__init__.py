"""Factor boundary-fixing free-group automorphisms by energy-decreasing chord slides."""
from .diagram import MarkedDiagram, basepoint_diagram, diagram_energy, diagram_from_automorphism, is_basepoint, validate
from .factor import Automorphism, Certificate, factor, random_mapping_class, validate_automorphism, verify
from .fatgraph import Fatgraph, WhiteheadMove, boundary_cycles, from_diagram, slide_to_whitehead_pair, whitehead_move
from .freegroup import Basepoint, concat, energy, invert, left_cancellation, parse_word, reduce, word_length
from .reduction import Strategy, find_slide_exhaustive, find_slide_guided, reduce_to_basepoint
from .slides import Direction, Slide, apply_slide, enumerate_slides, inverse_slide

__version__ = "0.1.0"
