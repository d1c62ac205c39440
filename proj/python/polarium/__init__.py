"""Polar-code toolkit: construction, BP/BPL/SC/SCL decoding and AWGN simulation."""

from polarium._core import (  # noqa: F401
    CheckNode,
    CrcConfig,
    DecodeCandidate,
    DecoderKind,
    PolarCode,
    ScResult,
    SclResult,
    SimPoint,
    StagePermutation,
    StopRule,
    assemble_u,
    awgn,
    bhattacharyya_parameters,
    boxplus,
    bp_decode,
    bpl_decode,
    bpsk_modulate,
    code_from_json,
    construct_bhattacharyya,
    construct_rm_polar,
    crc_append,
    crc_check,
    derive_stream_seed,
    encode,
    euclidean_select,
    extract_info,
    g_matrix_check,
    identity_permutation,
    llr_from_channel,
    ml_decode_bruteforce,
    polar_transform,
    row_weight,
    run_simulation,
    sc_decode,
    scl_decode,
    select_permutations,
    separations_from_permutation,
    sigma_from_ebn0,
)

__version__ = "0.1.0"
