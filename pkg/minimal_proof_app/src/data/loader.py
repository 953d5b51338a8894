import json
import logging
from pathlib import Path
from typing import Union

from src.core.arena import ArenaError, ArenaSyntaxError, ExplicitArena
from src.core.cost import BUILTIN_MODELS, CostConfigError, CostModel, load_cost_model
from src.utils.validators import validate_arena_document, validate_cost_config

logger = logging.getLogger(__name__)


def load_arena(text: str) -> ExplicitArena:
    """
    Builds an explicit arena from the text of an arena document.

    Parameters:
    - text: JSON document with atoms, agents, states and transitions. The
      order of declarations fixes the order of successors.

    Returns:
    ExplicitArena: The arena, with exactly the declared states and transitions.

    Raises:
    ArenaSyntaxError: If the text is not valid JSON (carries line and column).
    ArenaError: If the document refers to undeclared names or leaves a
      required set empty.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ArenaSyntaxError(f"Invalid arena document: {e.msg}", e.lineno, e.colno) from e

    is_valid, errors = validate_arena_document(doc)
    if not is_valid:
        for error in errors[1:]:
            logger.debug("Further arena error: %s", error)
        raise ArenaError(errors[0])

    return ExplicitArena(
        atoms=doc["atoms"],
        agents=doc["agents"],
        states=[(record["id"], record.get("labels", [])) for record in doc["states"]],
        transitions=[(record["from"], record["agent"], record["to"]) for record in doc["transitions"]],
    )


def load_arena_file(path: Union[str, Path]) -> ExplicitArena:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ArenaError(f"Cannot read arena file '{path}': {e.strerror}") from e
    arena = load_arena(text)
    logger.info("Loaded %r from %s", arena, path)
    return arena


def dump_arena(arena: ExplicitArena) -> str:
    """Canonical arena document; load_arena(dump_arena(arena)) == arena."""
    doc = {
        "atoms": list(arena.atoms),
        "agents": list(arena.agents),
        "states": [
            {"id": state, "labels": [atom for atom in arena.atoms if atom in arena.labels(state)]}
            for state in arena.states
        ],
        "transitions": [
            {"from": source, "agent": agent, "to": target}
            for source, agent, target in arena.transitions()
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_cost_config(config: dict) -> CostModel:
    is_valid, errors = validate_cost_config(config)
    if not is_valid:
        raise CostConfigError(errors[0])
    return load_cost_model(config)


def load_cost_option(option: str) -> CostModel:
    """
    Resolves a command-line cost option.

    Parameters:
    - option: "depth", "query_count", "weighted" (every weight 1) or
      "weighted:PATH" where PATH is a JSON cost document.

    Returns:
    CostModel: The selected model.

    Raises:
    CostConfigError: If the option or the referenced document is invalid.
    """
    name, _, path = option.partition(":")
    if name not in BUILTIN_MODELS:
        raise CostConfigError(f"Unknown cost model '{name}'; expected one of {', '.join(BUILTIN_MODELS)}.")
    if not path:
        return BUILTIN_MODELS[name]
    if name != "weighted":
        raise CostConfigError(f"Cost model '{name}' takes no configuration file.")
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise CostConfigError(f"Cannot read cost configuration '{path}': {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise CostConfigError(f"Invalid cost configuration '{path}': {e.msg} (line {e.lineno}, column {e.colno})") from e
    if isinstance(config, dict):
        config.setdefault("model", "weighted")
    return load_cost_config(config)
