#pragma once

// Small built-in games used by the CLI and the tests.

#include <string>
#include <vector>

#include "psg/game.hpp"

namespace psg {

/// Player 1 on {x, y, z}: x stays with prob alpha and moves to y otherwise,
/// y moves to z and z moves to x. Alpha ranges over {0, 1/4, 1/2, 3/4, 1}.
/// Player 2 has a single state and action.
ProductGame fig_1();
/// Same kernel with alpha in {1/8, 3/8, 5/8, 7/8}.
ProductGame fig_1_eps();

/// Player 2 on {x, y, z} with beta in {0, 1/8, 1/4, 3/8, 1/2}: x moves to y,
/// y goes to x w.p. beta, stays w.p. 1 - beta - beta^2, falls to z w.p.
/// beta^2; z is absorbing. Player 1 has one state and one action.
ProductGame example_4_2();
/// As example_4_2 but x stays w.p. 1 - 2 beta and moves to y w.p. 2 beta.
ProductGame example_4_3();

/// Names accepted by builtin_game.
std::vector<std::string> builtin_names();
/// Throws PreconditionError for unknown names.
ProductGame builtin_game(const std::string& name);

}  // namespace psg
