from typing import MutableMapping, Optional

from src.core.arena import ExplicitArena

RESULT_KEYS = ('result', 'proof', 'model')


def replace_arena(session: MutableMapping, arena: Optional[ExplicitArena]) -> bool:
    """
    Stores a newly loaded arena in the viewer session.

    Search results belong to the arena they were computed on, so they are
    dropped whenever the arena actually changes. Reloading an equal arena
    keeps them.

    Parameters:
    - session: Streamlit session state, or any mutable mapping.
    - arena: The arena to show.

    Returns:
    - bool: True if the stored arena changed.
    """
    if session.get('arena') is not None and session.get('arena') == arena:
        return False
    session['arena'] = arena
    for key in RESULT_KEYS:
        session[key] = None
    return True
