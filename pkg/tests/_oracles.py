"""Independent reference implementations used to cross-check the package.

Deliberately dumb: counts recomputed from scratch each round, character-level
pattern matching with backtracking. These never share code with the
implementations they verify.
"""

from __future__ import annotations

_ALLOWED_SEPARATOR_EXEMPT = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.%")


def oracle_closure(urls, threshold, min_support, count_propagated=True):
    """Exhaustive fixpoint of the classification + relabeling rules.

    `urls`: {url_id: (label, set_of_ast_ids)} with label "SAFE"/"TRACKING".
    Returns (tracking_asts, labels, origins).
    """
    labels = {u: lab for u, (lab, _) in urls.items()}
    origins = {u: "FILTER_LIST" for u in urls}
    memberships = {u: set(aids) for u, (_, aids) in urls.items()}
    carriers: dict[str, set[str]] = {}
    for u, aids in memberships.items():
        for a in aids:
            carriers.setdefault(a, set()).add(u)
    tracking_asts: set[str] = set()
    while True:
        changed = False
        for ast, carrying in carriers.items():
            if ast in tracking_asts:
                continue
            if count_propagated:
                track = sum(1 for u in carrying if labels[u] == "TRACKING")
                total = len(carrying)
            else:
                track = sum(1 for u in carrying
                            if labels[u] == "TRACKING" and origins[u] == "FILTER_LIST")
                total = sum(1 for u in carrying
                            if labels[u] == "SAFE"
                            or (labels[u] == "TRACKING" and origins[u] == "FILTER_LIST"))
            if total >= min_support and track / total >= threshold:
                tracking_asts.add(ast)
                changed = True
        for u in urls:
            if labels[u] == "SAFE" and memberships[u] & tracking_asts:
                labels[u] = "TRACKING"
                origins[u] = "PROPAGATED"
                changed = True
        if not changed:
            return tracking_asts, labels, origins


def oracle_dynamic(insertions, threshold, min_support, count_propagated=True):
    """Replay insertions one at a time, running the closure after each.

    `insertions`: ordered list of (url_id, label, ast_ids). Classifications
    and relabels persist across steps (monotone ratchet). Returns the same
    triple as oracle_closure plus the per-step tracking-AST sets.
    """
    labels: dict[str, str] = {}
    origins: dict[str, str] = {}
    memberships: dict[str, set[str]] = {}
    tracking_asts: set[str] = set()
    steps = []
    for url_id, label, ast_ids in insertions:
        labels[url_id] = label
        origins[url_id] = "FILTER_LIST"
        memberships[url_id] = set(ast_ids)
        while True:
            changed = False
            carriers: dict[str, set[str]] = {}
            for u, aids in memberships.items():
                for a in aids:
                    carriers.setdefault(a, set()).add(u)
            for ast, carrying in carriers.items():
                if ast in tracking_asts:
                    continue
                if count_propagated:
                    track = sum(1 for u in carrying if labels[u] == "TRACKING")
                    total = len(carrying)
                else:
                    track = sum(1 for u in carrying
                                if labels[u] == "TRACKING"
                                and origins[u] == "FILTER_LIST")
                    total = sum(1 for u in carrying
                                if labels[u] == "SAFE"
                                or (labels[u] == "TRACKING"
                                    and origins[u] == "FILTER_LIST"))
                if total >= min_support and track / total >= threshold:
                    tracking_asts.add(ast)
                    changed = True
            for u in memberships:
                if labels[u] == "SAFE" and memberships[u] & tracking_asts:
                    labels[u] = "TRACKING"
                    origins[u] = "PROPAGATED"
                    changed = True
            if not changed:
                break
        steps.append(set(tracking_asts))
    return tracking_asts, labels, origins, steps


def oracle_counts(urls):
    """Recompute per-AST safe/track counts from labels and memberships."""
    safe: dict[str, int] = {}
    track: dict[str, int] = {}
    for _u, (label, aids) in urls.items():
        bucket = safe if label == "SAFE" else track
        for a in aids:
            bucket[a] = bucket.get(a, 0) + 1
    return safe, track


# -- naive filter-rule matching ------------------------------------------------


def _match_at(pattern: str, text: str, i: int) -> bool:
    if not pattern:
        return True
    head, rest = pattern[0], pattern[1:]
    if head == "*":
        return any(_match_at(rest, text, j) for j in range(i, len(text) + 1))
    if head == "^":
        if i == len(text):
            return _match_at(rest, text, i)
        if text[i] not in _ALLOWED_SEPARATOR_EXEMPT:
            return _match_at(rest, text, i + 1)
        return False
    if i < len(text) and text[i] == head:
        return _match_at(rest, text, i + 1)
    return False


def naive_rule_match(rule: str, url: str) -> bool:
    """Character-level interpretation of the simplified rule subset."""
    rule = rule.lower()
    url = url.lower()
    if rule.startswith("||"):
        body = rule[2:]
        sep = url.find("://")
        if sep == -1:
            return False
        scheme = url[:sep]
        if not scheme or not scheme[0].isalpha():
            return False
        if not all(c.isalnum() or c in "+.-" for c in scheme):
            return False
        authority_end = len(url)
        for stop in "/?#":
            at = url.find(stop, sep + 3)
            if at != -1:
                authority_end = min(authority_end, at)
        starts = [sep + 3]
        for j in range(sep + 3, authority_end):
            if url[j] == ".":
                starts.append(j + 1)
        return any(_match_at(body, url, s) for s in starts)
    return any(_match_at(rule, url, i) for i in range(len(url) + 1))
