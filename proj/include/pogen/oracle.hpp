#pragma once

#include "pogen/logic.hpp"
#include "pogen/pogp.hpp"
#include "pogen/strategies.hpp"
#include "pogen/transition_system.hpp"

#include <optional>
#include <stdexcept>

namespace pogen
{

struct PoCheck
{
    bool sound = true;
    std::optional< Cube > witness; // a full state of c (inside the frame) with no successor in d′
};

// Does every state of c (restricted to `frame` when given) have a successor
// in d′? One 2QBF call.
PoCheck verify_po( const TransitionSystem& ts, const Cube& c, const Cube& d_next, const Cnf* frame = nullptr );

class oracle_too_large : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Largest valid generalization by enumeration. Fix mode searches the
// subcubes of m; free mode every cube over the state variables whose states
// inside R all have a successor in d′ and which meets R. Ties keep the
// first cube found.
struct OracleResult
{
    Cube cube;
    std::size_t removed = 0;
};

OracleResult brute_force_oracle( const PogpInstance& p, Mode mode, std::size_t max_state_vars = 12 );

} // namespace pogen
