#pragma once

#include "pogen/logic.hpp"
#include "pogen/sat.hpp"

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace pogen::opt
{

class no_solution : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Clauses and outputs of a totalizer: outputs[k - 1] holds iff at least k
// inputs hold (both directions are encoded).
struct Totalizer
{
    Cnf clauses;
    std::vector< Lit > outputs;
};

Totalizer build_totalizer( std::span< const Lit > inputs, Var& next_free );

struct MaxSatProblem
{
    Cnf hard;
    std::vector< Lit > soft; // unit soft clauses, weight 1
};

struct MaxSatResult
{
    Assignment model;
    std::size_t satisfied = 0;
    sat::Stats stats;
};

struct MaxSatOptions
{
    sat::Polarity polarity = sat::Polarity::phase_saving;
    std::vector< Var > priority;
};

// Exact partial MaxSAT by SAT-UNSAT search over a totalizer.
MaxSatResult max_sat( const MaxSatProblem& p, const MaxSatOptions& options = {} );

// Minimum-cardinality subset of `candidates` hitting every clause of
// `universe`. Among optima, earlier candidates are preferred.
std::vector< Lit > min_cover( std::span< const Clause > universe, std::span< const Lit > candidates );

// ∃outer ∀universal ∃rest : matrix ∧ outer_constraints
struct Qbf2Problem
{
    std::vector< Var > outer;
    std::vector< Var > universal;
    Cnf matrix;
    Cnf outer_constraints; // over outer variables only
};

struct Qbf2Result
{
    bool valid = false;
    Assignment witness;                  // values of the outer block if valid
    std::vector< Lit > counterexample;  // universal assignment if invalid without outer block
    std::size_t iterations = 0;
};

// Counterexample-guided 2QBF solving. Refinements persist between calls,
// so one instance can answer several queries under outer assumptions.
class Qbf2Solver
{
public:
    explicit Qbf2Solver( Qbf2Problem p );
    ~Qbf2Solver();
    Qbf2Solver( Qbf2Solver&& ) noexcept;
    Qbf2Solver& operator=( Qbf2Solver&& ) noexcept;

    Qbf2Result solve( std::span< const Lit > outer_assumptions = {} );
    const sat::Stats& stats() const;

private:
    struct Impl;
    std::unique_ptr< Impl > _impl;
};

Qbf2Result qbf2_solve( const Qbf2Problem& p );

class invalid_base : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct MaxQbfProblem
{
    Qbf2Problem qbf;
    std::vector< Lit > soft; // over outer variables
};

struct MaxQbfResult
{
    std::size_t satisfied = 0;
    Assignment witness;
    std::size_t qbf_calls = 0;
};

// Largest number of soft literals that can hold together with a valid
// residual QBF. Searches cardinalities from the top unless `ascending`.
MaxQbfResult max_qbf( const MaxQbfProblem& p, bool ascending = false );

} // namespace pogen::opt
