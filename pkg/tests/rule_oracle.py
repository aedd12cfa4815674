"""
Brute-force reference for one event-resolution pass, written against plain
dicts so it shares no code with src.engine.rules.

Agents are dicts with id, team ("blue"/"red"), x, y, has_flag, tagged, oob.
"""
import math

WIDTH, DEPTH = 160.0, 80.0
BASE_RADIUS, TAG_RADIUS, GRAB_RADIUS = 10.0, 10.0, 10.0
HOME = {"blue": (10.0, 40.0), "red": (150.0, 40.0)}
OTHER = {"blue": "red", "red": "blue"}


def _dist(p, q):
    return math.sqrt((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2)


def _pos(agent):
    return (agent["x"], agent["y"])


def _side(point):
    return "blue" if point[0] < WIDTH / 2 else "red"


def _outside(point):
    return point[0] < 0 or point[0] > WIDTH or point[1] < 0 or point[1] > DEPTH


def oracle_resolve(agents, carriers, scores):
    """carriers maps flag team -> carrier id or None. Returns (agents, carriers, scores, events)"""
    agents = [dict(a) for a in agents]
    carriers = dict(carriers)
    scores = dict(scores)
    events = []

    def lose_flag(agent):
        if agent["has_flag"]:
            agent["has_flag"] = False
            carriers[OTHER[agent["team"]]] = None

    for agent in agents:
        if _outside(_pos(agent)):
            if not agent["oob"]:
                events.append(("out_of_bounds", agent["id"], None))
            agent["oob"] = True
            agent["tagged"] = True
            lose_flag(agent)
        else:
            agent["oob"] = False

    for tagger in agents:
        for target in agents:
            if tagger["team"] == target["team"] or tagger["tagged"] or target["tagged"]:
                continue
            home_side = tagger["team"]
            if _side(_pos(tagger)) != home_side or _side(_pos(target)) != home_side:
                continue
            if _dist(_pos(tagger), _pos(target)) > TAG_RADIUS:
                continue
            kind = "tag_with_flag" if target["has_flag"] else "tag"
            target["tagged"] = True
            lose_flag(target)
            events.append((kind, tagger["id"], target["id"]))

    for agent in agents:
        if agent["tagged"] and not agent["oob"] and _dist(_pos(agent), HOME[agent["team"]]) <= BASE_RADIUS:
            agent["tagged"] = False

    for agent in agents:
        enemy = OTHER[agent["team"]]
        if agent["tagged"] or agent["has_flag"] or carriers[enemy] is not None:
            continue
        if _dist(_pos(agent), HOME[enemy]) <= GRAB_RADIUS:
            agent["has_flag"] = True
            carriers[enemy] = agent["id"]
            scores[agent["team"]] += 1
            events.append(("grab", agent["id"], None))

    for agent in agents:
        if agent["has_flag"] and _dist(_pos(agent), HOME[agent["team"]]) <= BASE_RADIUS:
            agent["has_flag"] = False
            carriers[OTHER[agent["team"]]] = None
            scores[agent["team"]] += 2
            events.append(("capture", agent["id"], None))

    return agents, carriers, scores, events
