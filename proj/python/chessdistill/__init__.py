"""Chess puzzle distillation toolkit: FEN/move core, solver prompts,
verifiable rewards, and theme-balanced sampling, backed by the C++ library."""

from ._core import (  # noqa: F401
    LitePuzzle,
    ToolkitError,
    __version__,
    apply_move,
    count_sentences,
    extract_final_answer,
    legal_moves,
    parse_fen,
    perft,
    piece_arrangement,
    render_legal_moves,
    sample_balanced,
    score,
    solver_prompt,
)
