"""Houghton groups H_n, the subgroups U_v, and constructive invariable generation.

Given arbitrary conjugates of the standard generating sets, the ``recover_*``
functions rebuild standard generators inside the generated subgroup and emit
witness-word certificates that :func:`check_certificate` verifies exactly.
"""

from .adversary import SamplerParams, Scenario, make_scenario, sample_element
from .errors import HoughtonError, InternalCheckFailed
from .groups import Family, GeneratingSetSpec, generating_set, is_member_Uv, standard_generator, standard_h
from .perm import (
    HoughtonElement,
    apply,
    compose,
    conjugate,
    construct,
    cycle_type,
    invert,
    orbit_descriptor,
    parity,
    power,
    solve_power,
)
from .recovery import (
    CertificateReport,
    ConjugateTuple,
    check_certificate,
    produce_3cycle,
    realize_block_permutation,
    recover,
    recover_h2_size2,
    recover_h2_size3,
    recover_hn,
    recover_uv,
)
from .words import GenerationCertificate, Witness, Word, evaluate_word, verify_witness

__version__ = "0.1.0"
