#pragma once

#include "pogen/logic.hpp"
#include "pogen/pogp.hpp"
#include "pogen/strategies.hpp"
#include "pogen/transition_system.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pogen::pdr
{

enum class Result : std::uint8_t
{
    safe,
    unsafe,
    unknown
};

std::string_view to_string( Result r );

struct Limits
{
    double seconds = 0.0;        // 0: none
    std::size_t frames = 0;      // 0: none
    std::size_t obligations = 0; // 0: none
};

using CancelFlag = std::shared_ptr< std::atomic< bool > >;

struct EngineConfig
{
    Strategy strategy{ Method::lifting, Mode::fix };
    GenOptions gen;
    Limits limits;
    bool reverse = false;
    bool forward_obligations = true;
    bool verify_pos = false; // check every generalized PO with verify_po

    // Called with every satisfiable consecution query before generalization.
    std::function< void( const PogpInstance& ) > on_pogp;
    // Replaces the strategy; for tests.
    std::function< Cube( const PogpInstance& ) > custom_generalizer;

    CancelFlag cancel;
};

struct TraceStep
{
    Cube state; // full over the state variables
    Cube input; // full over the inputs
};

struct EngineStats
{
    std::size_t frames = 0;
    std::size_t clauses = 0;
    std::size_t clause_literals = 0;
    std::size_t obligations = 0;
    std::size_t generalizations = 0;
    std::size_t removed_literals = 0;
    std::size_t state_literals = 0;
    std::uint64_t sat_calls = 0;
    std::chrono::duration< double > generalization_time{};
    std::chrono::duration< double > total_time{};

    double mean_clause_size() const;
    double reduction_ratio() const;
    double generalization_share() const;
};

struct Verdict
{
    Result result = Result::unknown;
    std::vector< Clause > invariant; // safe; over the checked system's state variables
    std::vector< TraceStep > trace;  // unsafe; initial to bad state, in the original orientation
    bool reversed = false;           // the invariant belongs to the reversed system
    std::string strategy;
    std::string reason; // unknown
    EngineStats stats;
};

// A generalized PO that contains an initial state but does not pass
// verify_po: the strategy produced an unsound cube.
class soundness_alarm : public std::runtime_error
{
public:
    soundness_alarm( std::string what, Cube po, std::optional< Cube > witness )
        : std::runtime_error( std::move( what ) ), _po{ std::move( po ) }, _witness{ std::move( witness ) }
    {}

    const Cube& po() const { return _po; }
    const std::optional< Cube >& witness() const { return _witness; }

private:
    Cube _po;
    std::optional< Cube > _witness;
};

class certificate_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

Verdict check( std::shared_ptr< const TransitionSystem > ts, const EngineConfig& config );

// Several strategies on separate threads; the first verdict cancels the
// rest. Errors of a worker are rethrown only if no worker decides.
Verdict portfolio( std::shared_ptr< const TransitionSystem > ts, const std::vector< EngineConfig >& configs );

// Empty when the certificate is valid, otherwise a description.
std::optional< std::string > invariant_problem( const TransitionSystem& ts, const std::vector< Clause >& invariant );
std::optional< std::string > trace_problem( const TransitionSystem& ts, const std::vector< TraceStep >& trace );

// AIGER witness ("1", "b0", initial latches, one input line per step, ".").
std::string aiger_witness( const TransitionSystem& ts, const std::vector< TraceStep >& trace );

} // namespace pogen::pdr
