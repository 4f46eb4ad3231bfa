#pragma once

#include "pogen/logic.hpp"
#include "pogen/transition_system.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pogen
{

// One PO generalization problem: m ∧ i ∧ t′ is a model of ¬d ∧ R ∧ T ∧ d′
// and the task is to enlarge m while every state keeps a successor in d′.
struct PogpInstance
{
    std::shared_ptr< const TransitionSystem > ts;
    Cnf frame;   // R_{k-1}, over state variables
    Cube d;      // blocked cube
    Cube d_next; // d′
    Cube m;      // full over state
    Cube i;      // full over inputs
    Cube t_next; // full over next state
    Cube aux;    // values of T's remaining variables; may be empty
    int level = 1;
};

class invalid_pogp : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Violated instance invariants, empty if none.
std::vector< std::string > pogp_problems( const PogpInstance& p );
void validate( const PogpInstance& p );

// Assignment of every variable of T (and of the frame) extending m, i, t′.
// Uses `aux` when present, otherwise completes T by SAT.
Assignment full_model( const PogpInstance& p );

// Literals of a full model of T that are not on state variables.
Cube non_state_part( const PogpInstance& p, const Assignment& model );

std::string serialize( const PogpInstance& p );
PogpInstance parse_pogp( std::string_view text );


} // namespace pogen
