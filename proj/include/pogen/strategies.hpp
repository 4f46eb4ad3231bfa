#pragma once

#include "pogen/logic.hpp"
#include "pogen/pogp.hpp"
#include "pogen/sat.hpp"
#include "pogen/transition_system.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pogen
{

enum class Method : std::uint8_t
{
    sim01x,
    lifting,
    lifting_ld,
    igbg,
    s01x,
    ms01x,
    ms01x_igbg,
    greedy_cover,
    gentr,
    ilp_cover,
    sat_cover,
    greedy_qbf,
    max_qbf,
    structural
};

enum class Mode : std::uint8_t
{
    fix,
    free
};

struct Strategy
{
    Method method = Method::lifting;
    Mode mode = Mode::fix;

    friend bool operator==( const Strategy&, const Strategy& ) = default;
};

std::string_view to_string( Method m );
std::string to_string( Strategy s );
bool supports_free( Method m );
const std::vector< Method >& all_methods();

class unknown_strategy : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// "ms01x", "ms01x:free", ...
Strategy parse_strategy( std::string_view name );

enum class LiftingCall : std::uint8_t
{
    automatic, // extended when the system keeps C separately
    plain,
    extended
};

struct GenOptions
{
    LiftingCall lifting = LiftingCall::automatic;
    bool unsafe = false; // allow plain lifting without left-totality
};

struct Incompatibility
{
    std::string missing; // the capability or property lacking
    std::string reason;
};

std::optional< Incompatibility > check_applicable( Strategy s, const TransitionSystem& ts, const GenOptions& options = {} );

// Thrown when an invariant that a strategy relies on is broken, e.g. a
// lifting query that turns out satisfiable.
class strategy_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

class inapplicable_strategy : public std::invalid_argument
{
public:
    explicit inapplicable_strategy( Incompatibility why )
        : std::invalid_argument( why.reason ), _why{ std::move( why ) }
    {}

    const Incompatibility& why() const { return _why; }

private:
    Incompatibility _why;
};

// Per-state-variable count of successful removals. Probing prefers high
// counts; ties go to the lower variable id.
class Activity
{
public:
    void reward( const TransitionSystem& ts, const Cube& before, const Cube& after );
    std::uint64_t score( Var state_var ) const;

    // State literals of m, most promising removal first.
    std::vector< Lit > removal_order( const Cube& m ) const;
    // Least promising first; the preferred order for literals to keep.
    std::vector< Lit > retention_order( const Cube& m ) const;

private:
    std::vector< std::uint64_t > _count; // by variable
};

struct CombinerConfig
{
    double alpha = 2.0;  // "not much slower"
    double gamma = 10.0; // "much slower"
    double beta = 0.2;   // share of strict improvements that counts as successful
    std::size_t window = 50;
};

enum class Regime : std::uint8_t
{
    combined,
    ms01x_only,
    igbg_only
};

std::string_view to_string( Regime r );

// Chooses between IGBG, MS01X and IGBG followed by warm-started MS01X from
// running statistics. Single-method regimes last one window, after which
// both are measured again.
class Combiner
{
public:
    Combiner() = default;
    explicit Combiner( CombinerConfig config ) : _config{ config } {}

    Regime regime() const { return _regime; }
    const CombinerConfig& config() const { return _config; }

    // A call in the combined regime.
    void record( double igbg_seconds, double ms01x_seconds, std::size_t igbg_removed, std::size_t ms01x_removed );
    // A call in a single-method regime.
    void tick();

private:
    CombinerConfig _config;
    Regime _regime = Regime::combined;
    std::size_t _calls = 0;
    std::size_t _improved = 0;
    double _igbg_time = 0.0;
    double _ms01x_time = 0.0;
};

struct GenContext
{
    Activity activity;
    Combiner combiner;
    GenOptions options;
};

struct GenResult
{
    Cube cube;
    std::size_t removed = 0;
    std::string strategy;
    std::chrono::duration< double > time{};
    sat::Stats stats;
};

// Runs one strategy after checking applicability; rewards the activity of
// removed variables.
GenResult generalize( Strategy s, const PogpInstance& p, GenContext& ctx );

// The individual methods. Each returns the generalized cube; `stats`
// accumulates solver statistics.
Cube gen_01x_sim( const PogpInstance& p, const Activity& a );
Cube gen_lifting( const PogpInstance& p, const Activity& a, bool literal_dropping, bool extended, sat::Stats& stats );
Cube gen_igbg( const PogpInstance& p, sat::Stats& stats );
Cube gen_s01x( const PogpInstance& p, Mode mode, const Activity& a, sat::Stats& stats );
Cube gen_ms01x( const PogpInstance& p, Mode mode, const std::optional< Cube >& warm_start, sat::Stats& stats );
Cube gen_greedy_cover( const PogpInstance& p, const Activity& a );
Cube gen_gentr( const PogpInstance& p, const Activity& a, sat::Stats& stats );
Cube gen_ilp_cover( const PogpInstance& p, Mode mode, const Activity& a, sat::Stats& stats );
Cube gen_sat_cover( const PogpInstance& p, Mode mode, const Activity& a, sat::Stats& stats );
Cube gen_greedy_qbf( const PogpInstance& p, Mode mode, const Activity& a );
Cube gen_max_qbf( const PogpInstance& p, Mode mode );
Cube gen_structural( const PogpInstance& p );
Cube combine_ms01x_igbg( const PogpInstance& p, Combiner& combiner, sat::Stats& stats );

} // namespace pogen
