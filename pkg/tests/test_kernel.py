"""The compiled playout kernel must reproduce the Python playout exactly: same outcome and
the same final position of the random stream."""

import pytest

from lotrsim import kernel
from lotrsim.agents import PolicyKind
from lotrsim.cards import Difficulty
from lotrsim.rng import Stream
from lotrsim.search import python_playout

from support import rigged_scenario
from test_actions import reached_states

pytestmark = pytest.mark.skipif(not kernel.available(), reason="compiled kernel not built")


def python_reference(state, policy, seed, shuffle_first):
    s = state.copy(rng=Stream(seed))
    if shuffle_first:
        s.rng.shuffle(s.player_deck)
        s.rng.shuffle(s.encounter_deck)
    return python_playout(s, policy), s.rng.state


@pytest.mark.parametrize("difficulty", list(Difficulty))
@pytest.mark.parametrize("shuffle_first", [False, True])
def test_kernel_matches_python(difficulty, shuffle_first):
    checked = 0
    for game in range(12):
        for i, s in enumerate(reached_states(game, difficulty, PolicyKind.Random, 200)):
            if i % 5:
                continue
            core = kernel.table_for(s.scenario.library)[2]
            for policy in PolicyKind:
                seed = 1000 * game + i
                code, state = core.playout(kernel.pack(s), policy is PolicyKind.Expert, seed, shuffle_first)
                want_status, want_state = python_reference(s, policy, seed, shuffle_first)
                assert kernel.STATUS[code] is want_status, (s.render(), policy)
                assert state == want_state
                checked += 1
    assert checked > 50


def test_kernel_on_custom_library():
    from lotrsim.engine import advance, init_game
    s = init_game(rigged_scenario(), 0)
    advance(s)
    core = kernel.table_for(s.scenario.library)[2]
    for seed in range(20):
        for policy in PolicyKind:
            code, state = core.playout(kernel.pack(s), policy is PolicyKind.Expert, seed, False)
            assert (kernel.STATUS[code], state) == python_reference(s, policy, seed, False)


def test_toggle_restores():
    prev = kernel.set_enabled(False)
    assert not kernel.enabled()
    kernel.set_enabled(prev)
    assert kernel.enabled() == prev
