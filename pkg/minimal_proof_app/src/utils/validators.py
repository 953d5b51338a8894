from typing import Any, List, Mapping, Tuple

ARENA_FIELDS = ("atoms", "agents", "states", "transitions")
TRANSITION_FIELDS = ("from", "agent", "to")
COST_MODELS = ("depth", "query_count", "weighted")


def _names(doc: Mapping, key: str, errors: list) -> List[str]:
    values = doc.get(key)
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        errors.append(f"'{key}' must be a list of names.")
        return []
    if not values:
        errors.append(f"'{key}' must not be empty.")
    duplicates = sorted({v for v in values if values.count(v) > 1})
    if duplicates:
        errors.append(f"'{key}' declares {duplicates[0]} more than once.")
    return values


def validate_arena_document(doc: Any) -> Tuple[bool, List[str]]:
    """
    Validates a parsed arena document.

    Checks for:
    - Required fields: atoms, agents, states, transitions.
    - Non-empty atom and agent lists.
    - State records {id, labels} with unique ids and declared atoms.
    - Transition records {from, agent, to} referring to declared states and agents.

    Returns:
    (bool, list): A tuple containing a boolean for validity and a list of error messages.
    """
    errors = []
    if not isinstance(doc, dict):
        return False, ["Arena document must be an object."]

    missing = [key for key in ARENA_FIELDS if key not in doc]
    if missing:
        errors.append(f"Missing required fields: {', '.join(missing)}")
        return False, errors
    unexpected = sorted(set(doc) - set(ARENA_FIELDS))
    if unexpected:
        errors.append(f"Unexpected fields: {', '.join(unexpected)}")

    atoms = set(_names(doc, "atoms", errors))
    agents = set(_names(doc, "agents", errors))

    states = set()
    if not isinstance(doc["states"], list):
        errors.append("'states' must be a list of {id, labels} records.")
    else:
        for index, record in enumerate(doc["states"]):
            if not isinstance(record, dict) or not isinstance(record.get("id"), str):
                errors.append(f"State #{index} must be a record with a string 'id'.")
                continue
            state = record["id"]
            if state in states:
                errors.append(f"State '{state}' is declared twice.")
            states.add(state)
            state_labels = record.get("labels", [])
            if not isinstance(state_labels, list):
                errors.append(f"Labels of state '{state}' must be a list.")
                continue
            for atom in state_labels:
                if not isinstance(atom, str) or atom not in atoms:
                    errors.append(f"State '{state}' uses undeclared atom '{atom}'.")

    if not isinstance(doc["transitions"], list):
        errors.append("'transitions' must be a list of {from, agent, to} records.")
    else:
        for index, record in enumerate(doc["transitions"]):
            if not isinstance(record, dict) or any(key not in record for key in TRANSITION_FIELDS):
                errors.append(f"Transition #{index} must be a record with from, agent and to.")
                continue
            if not isinstance(record["agent"], str) or record["agent"] not in agents:
                errors.append(f"Transition #{index} uses undeclared agent '{record['agent']}'.")
            for key in ("from", "to"):
                if not isinstance(record[key], str) or record[key] not in states:
                    errors.append(f"Transition #{index} uses undeclared state '{record[key]}'.")

    return not errors, errors


def validate_cost_config(config: Any) -> Tuple[bool, List[str]]:
    """
    Validates a cost configuration mapping.

    Checks for:
    - A known model name.
    - Cost tables (weighted only) mapping names to finite non-negative numbers.

    Returns:
    (bool, list): A tuple containing a boolean for validity and a list of error messages.
    """
    errors = []
    if not isinstance(config, dict):
        return False, ["Cost configuration must be an object."]
    if config.get("model") not in COST_MODELS:
        errors.append(f"'model' must be one of {', '.join(COST_MODELS)}.")
    for key in ("atom_costs", "box_costs"):
        if key not in config:
            continue
        if config.get("model") != "weighted":
            errors.append(f"'{key}' is only allowed with the weighted model.")
        table = config[key]
        if not isinstance(table, dict):
            errors.append(f"'{key}' must map names to costs.")
            continue
        for name, value in table.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                errors.append(f"Cost of '{name}' in '{key}' is not a number.")
            elif not 0 <= value < float("inf"):
                errors.append(f"Cost of '{name}' in '{key}' must be finite and non-negative.")
    return not errors, errors
