#include "cli.hpp"

#include "pogen/metrics.hpp"
#include "pogen/oracle.hpp"
#include "pogen/pdr.hpp"
#include "pogen/pogp.hpp"
#include "pogen/strategies.hpp"
#include "pogen/transition_system.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <thread>

namespace pogen::cli
{
namespace
{

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class input_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string read_file( const fs::path& path )
{
    auto in = std::ifstream( path, std::ios::binary );
    if ( !in )
        throw input_error( "cannot read " + path.string() );
    auto ss = std::ostringstream{};
    ss << in.rdbuf();
    return ss.str();
}

void write_file( const fs::path& path, const std::string& text )
{
    auto out = std::ofstream( path, std::ios::binary );
    if ( !out || !( out << text ) )
        throw input_error( "cannot write " + path.string() );
}

std::vector< std::string > split_list( const std::string& list )
{
    auto items = std::vector< std::string >{};
    auto ss = std::istringstream( list );
    for ( std::string item; std::getline( ss, item, ',' ); )
    {
        item.erase( 0, item.find_first_not_of( " \t" ) );
        item.erase( item.find_last_not_of( " \t" ) + 1 );
        if ( !item.empty() )
            items.push_back( item );
    }
    return items;
}

// Runs f(0..n-1) on up to `jobs` threads; f must not throw.
template < class F >
void parallel_for( std::size_t n, std::size_t jobs, F&& f )
{
    if ( jobs == 0 )
        jobs = std::max( 1u, std::thread::hardware_concurrency() );
    jobs = std::min( jobs, n );
    if ( jobs <= 1 )
    {
        for ( std::size_t i = 0; i < n; ++i )
            f( i );
        return;
    }
    auto next = std::atomic< std::size_t >{ 0 };
    auto pool = std::vector< std::jthread >{};
    for ( std::size_t j = 0; j < jobs; ++j )
        pool.emplace_back( [ & ] {
            for ( auto i = next++; i < n; i = next++ )
                f( i );
        } );
}

std::string csv_field( const std::string& s )
{
    if ( s.find_first_of( ",\"\n" ) == std::string::npos )
        return s;
    auto quoted = std::string{ "\"" };
    for ( const char c : s )
    {
        if ( c == '"' )
            quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

std::string csv_value( const json& v )
{
    if ( v.is_string() )
        return csv_field( v.get< std::string >() );
    if ( v.is_null() )
        return "";
    if ( v.is_array() )
    {
        auto joined = std::string{};
        for ( const auto& item : v )
            joined += ( joined.empty() ? "" : ";" ) + item.get< std::string >();
        return csv_field( joined );
    }
    return v.dump();
}

// Looks up "a.b" paths in a report object.
const json& field( const json& j, const std::string& path )
{
    const json* cur = &j;
    auto ss = std::istringstream( path );
    for ( std::string key; std::getline( ss, key, '.' ); )
        cur = &cur->at( key );
    return *cur;
}

void write_csv( std::ostream& os, const std::vector< std::pair< std::string, std::string > >& columns, const std::vector< json >& rows )
{
    for ( std::size_t c = 0; c < columns.size(); ++c )
        os << ( c ? "," : "" ) << columns[ c ].first;
    os << '\n';
    for ( const auto& row : rows )
    {
        for ( std::size_t c = 0; c < columns.size(); ++c )
            os << ( c ? "," : "" ) << csv_value( field( row, columns[ c ].second ) );
        os << '\n';
    }
}

std::string fixed( double v, int digits = 3 )
{
    auto ss = std::ostringstream{};
    ss << std::fixed << std::setprecision( digits ) << v;
    return ss.str();
}

// Sends a report to --output or to `out`.
class Sink
{
public:
    Sink( const std::string& path, std::ostream& out ) : _path{ path }, _out{ out } {}

    std::ostream& stream() { return _path.empty() ? _out : _buffer; }

    void flush()
    {
        if ( !_path.empty() )
            write_file( _path, _buffer.str() );
    }

private:
    std::string _path;
    std::ostream& _out;
    std::ostringstream _buffer;
};

// --- loading -------------------------------------------------------------

struct SystemSpec
{
    std::string file;
    std::string format = "auto";
    std::string constraint_mode = "keep_separate";
    bool constraint_mode_given = false;
    bool reverse = false;
};

struct Loaded
{
    std::shared_ptr< const TransitionSystem > ts;
    std::string format;
    ConstraintMode mode = ConstraintMode::keep_separate;
    std::size_t latches = 0; // of the circuit as read, before any repair
    std::vector< std::string > notes;
};

std::string detect_format( const std::string& file, const std::string& text )
{
    const auto ext = fs::path( file ).extension().string();
    if ( ext == ".aag" )
        return "aiger";
    if ( ext == ".aig" )
        throw input_error( file + ": binary AIGER is not supported, convert to ASCII (aag)" );
    if ( text.rfind( "aag", 0 ) == 0 )
        return "aiger";
    return "dimspec";
}

Loaded load_system( const SystemSpec& spec )
{
    const auto text = read_file( spec.file );
    auto loaded = Loaded{};
    loaded.format = spec.format == "auto" ? detect_format( spec.file, text ) : spec.format;

    const auto mode = parse_constraint_mode( spec.constraint_mode );
    if ( !mode )
        throw input_error( "unknown constraint mode '" + spec.constraint_mode + "'" );
    loaded.mode = *mode;

    if ( loaded.format == "aiger" )
    {
        const auto circuit = parse_aiger( text );
        loaded.latches = circuit.latches.size();
        if ( spec.reverse && !circuit.constraints.empty() && loaded.mode == ConstraintMode::keep_separate )
        {
            if ( spec.constraint_mode_given )
                throw input_error( "--reverse needs the constraints repaired; use --constraint-mode self_loops or dead_end" );
            loaded.mode = ConstraintMode::self_loops;
            loaded.notes.push_back( "constraints repaired with self_loops before reversal" );
        }
        loaded.ts = std::make_shared< const TransitionSystem >( circuit_to_ts( circuit, loaded.mode ) );
    }
    else if ( loaded.format == "dimspec" )
    {
        loaded.ts = std::make_shared< const TransitionSystem >( parse_dimspec( text ) );
        loaded.latches = loaded.ts->state.size();
    }
    else
        throw input_error( "unknown format '" + loaded.format + "'" );
    return loaded;
}

// --- runs ----------------------------------------------------------------

struct RunSpec
{
    SystemSpec system;
    std::vector< std::string > strategies{ "lifting" };
    std::string mode; // empty: as in the strategy names
    std::string lifting = "auto";
    bool unsafe = false;
    pdr::Limits limits;
    std::uint64_t seed = 0;
    bool no_times = false;
};

struct RunOutcome
{
    json report;
    int code = exit_error;
    std::string witness;                // unsafe
    std::vector< Clause > invariant;    // safe
    Var num_vars = 0;
    bool invariant_reversed = false;
};

GenOptions gen_options( const RunSpec& spec )
{
    auto opts = GenOptions{};
    if ( spec.lifting == "plain" )
        opts.lifting = LiftingCall::plain;
    else if ( spec.lifting == "extended" )
        opts.lifting = LiftingCall::extended;
    else if ( spec.lifting != "auto" )
        throw input_error( "unknown lifting call '" + spec.lifting + "'" );
    opts.unsafe = spec.unsafe;
    return opts;
}

Strategy strategy_for( const std::string& name, const std::string& mode )
{
    auto s = parse_strategy( name );
    if ( mode == "free" && name.find( ':' ) == std::string::npos )
    {
        if ( !supports_free( s.method ) )
            throw unknown_strategy( "strategy '" + std::string( to_string( s.method ) ) + "' has no free variant" );
        s.mode = Mode::free;
    }
    else if ( !mode.empty() && mode != "fix" && mode != "free" )
        throw unknown_strategy( "unknown mode '" + mode + "'" );
    return s;
}

// The AIGER witness shows the circuit as read; a dead-end latch is dropped.
std::string witness_for( const TransitionSystem& ts, const std::vector< pdr::TraceStep >& trace, std::size_t latches )
{
    auto text = pdr::aiger_witness( ts, trace );
    if ( latches >= ts.state.size() || trace.empty() )
        return text;
    const auto line = text.find( '\n', text.find( '\n' ) + 1 ) + 1; // third line
    text.erase( line + latches, ts.state.size() - latches );
    return text;
}

json stats_json( const pdr::EngineStats& s, bool no_times )
{
    const auto t = [ & ]( double v ) { return no_times ? 0.0 : v; };
    return json{
        { "wall_time_s", t( s.total_time.count() ) },
        { "frames", s.frames },
        { "clauses", { { "count", s.clauses }, { "mean_size", s.mean_clause_size() } } },
        { "obligations", s.obligations },
        { "sat_calls", s.sat_calls },
        { "generalization",
          { { "calls", s.generalizations },
            { "removed_literals", s.removed_literals },
            { "state_literals", s.state_literals },
            { "time_s", t( s.generalization_time.count() ) },
            { "time_share", no_times ? 0.0 : s.generalization_share() },
            { "reduction_ratio", s.reduction_ratio() } } },
    };
}

RunOutcome run_system( const RunSpec& spec )
{
    auto outcome = RunOutcome{};
    auto& r = outcome.report;
    r[ "file" ] = spec.system.file;
    r[ "format" ] = spec.system.format;
    r[ "strategies" ] = spec.strategies;
    r[ "winner" ] = nullptr;
    r[ "reverse" ] = spec.system.reverse;
    r[ "constraint_mode" ] = spec.system.constraint_mode;
    r[ "seed" ] = spec.seed;
    r[ "verdict" ] = "error";
    r[ "exit_code" ] = exit_error;
    r[ "message" ] = "";

    const auto finish = [ & ]( std::string verdict, int code, std::string message ) {
        r[ "verdict" ] = std::move( verdict );
        r[ "exit_code" ] = code;
        r[ "message" ] = std::move( message );
        outcome.code = code;
        if ( !r.contains( "wall_time_s" ) )
            r.update( stats_json( {}, true ) );
        return outcome;
    };

    try
    {
        const auto loaded = load_system( spec.system );
        r[ "format" ] = loaded.format;
        r[ "constraint_mode" ] = std::string( to_string( loaded.mode ) );

        const auto opts = gen_options( spec );
        auto configs = std::vector< pdr::EngineConfig >{};
        const auto checked = spec.system.reverse ? std::make_shared< const TransitionSystem >( reverse( *loaded.ts ) ) : loaded.ts;
        for ( const auto& name : spec.strategies )
        {
            auto cfg = pdr::EngineConfig{};
            cfg.strategy = strategy_for( name, spec.mode );
            cfg.gen = opts;
            cfg.limits = spec.limits;
            cfg.reverse = spec.system.reverse;
            if ( const auto why = check_applicable( cfg.strategy, *checked, opts ) )
                return finish( "refused", exit_refused,
                               to_string( cfg.strategy ) + " is not applicable: missing " + why->missing + " (" + why->reason + ")" );
            configs.push_back( std::move( cfg ) );
        }
        if ( configs.empty() )
            throw input_error( "no strategy given" );

        const auto verdict = configs.size() == 1 ? pdr::check( loaded.ts, configs.front() ) : pdr::portfolio( loaded.ts, configs );
        r[ "winner" ] = verdict.strategy;
        r.update( stats_json( verdict.stats, spec.no_times ) );

        auto note = verdict.reason;
        for ( const auto& n : loaded.notes )
            note += ( note.empty() ? "" : "; " ) + n;

        switch ( verdict.result )
        {
        case pdr::Result::safe:
            outcome.invariant = verdict.invariant;
            outcome.num_vars = verdict.reversed ? checked->num_vars : loaded.ts->num_vars;
            outcome.invariant_reversed = verdict.reversed;
            return finish( "safe", exit_safe, note );
        case pdr::Result::unsafe:
            outcome.witness = witness_for( *loaded.ts, verdict.trace, loaded.latches );
            r[ "trace_length" ] = verdict.trace.size();
            return finish( "unsafe", exit_unsafe, note );
        case pdr::Result::unknown: return finish( "unknown", exit_unknown, note );
        }
        return finish( "unknown", exit_unknown, note );
    }
    catch ( const inapplicable_strategy& e )
    {
        return finish( "refused", exit_refused, "missing " + e.why().missing + " (" + e.why().reason + ")" );
    }
    catch ( const pdr::soundness_alarm& e )
    {
        return finish( "unsound", exit_unsound, e.what() );
    }
    catch ( const pdr::certificate_error& e )
    {
        return finish( "unsound", exit_unsound, e.what() );
    }
    catch ( const std::exception& e )
    {
        return finish( "error", exit_error, e.what() );
    }
}

const std::vector< std::pair< std::string, std::string > > run_columns = {
    { "file", "file" },
    { "strategies", "strategies" },
    { "winner", "winner" },
    { "reverse", "reverse" },
    { "constraint_mode", "constraint_mode" },
    { "verdict", "verdict" },
    { "exit_code", "exit_code" },
    { "wall_time_s", "wall_time_s" },
    { "frames", "frames" },
    { "clauses", "clauses.count" },
    { "mean_clause_size", "clauses.mean_size" },
    { "obligations", "obligations" },
    { "generalizations", "generalization.calls" },
    { "generalization_time_share", "generalization.time_share" },
    { "reduction_ratio", "generalization.reduction_ratio" },
};

void write_run_text( std::ostream& os, const json& r )
{
    os << r[ "file" ].get< std::string >() << ": " << r[ "verdict" ].get< std::string >();
    if ( !r[ "winner" ].is_null() && !r[ "winner" ].get< std::string >().empty() )
        os << " (" << r[ "winner" ].get< std::string >() << ")";
    os << '\n';
    if ( const auto msg = r[ "message" ].get< std::string >(); !msg.empty() )
        os << "  " << msg << '\n';
    if ( r[ "verdict" ] == "refused" || r[ "verdict" ] == "error" )
        return;
    const auto& g = r[ "generalization" ];
    os << "  frames " << r[ "frames" ] << ", clauses " << r[ "clauses" ][ "count" ] << " (mean size "
       << fixed( r[ "clauses" ][ "mean_size" ].get< double >(), 2 ) << "), obligations " << r[ "obligations" ] << '\n';
    os << "  generalization: " << g[ "calls" ] << " calls, reduction ratio " << fixed( g[ "reduction_ratio" ].get< double >() )
       << ", " << fixed( 100.0 * g[ "time_share" ].get< double >(), 1 ) << "% of " << fixed( r[ "wall_time_s" ].get< double >() )
       << " s\n";
}

void write_invariant( const fs::path& path, const RunOutcome& o )
{
    auto os = std::ostringstream{};
    if ( o.invariant_reversed )
        os << "c invariant of the reversed system\n";
    os << "p cnf " << o.num_vars << ' ' << o.invariant.size() << '\n';
    for ( const auto& c : o.invariant )
    {
        for ( const auto l : c )
            os << l.to_dimacs() << ' ';
        os << "0\n";
    }
    write_file( path, os.str() );
}

// --- options shared by subcommands -----------------------------------------

struct Common
{
    std::uint64_t seed = 0;
    std::string report = "text";
    std::string output;
    bool no_times = false;
    std::size_t jobs = 1;
};

void add_report_options( CLI::App* app, Common& c )
{
    app->add_option( "--seed", c.seed, "Seed for sampling and ordering" )->envname( "POGEN_SEED" );
    app->add_option( "--report", c.report, "Report format" )->check( CLI::IsMember( { "text", "json", "csv" } ) );
    app->add_option( "-o,--output", c.output, "Write the report here instead of stdout" );
    app->add_flag( "--no-times", c.no_times, "Report all times as 0 (for diffable output)" );
}

void add_system_options( CLI::App* app, SystemSpec& s )
{
    app->add_option( "--format", s.format, "Input format" )->check( CLI::IsMember( { "auto", "aiger", "dimspec" } ) );
    app->add_flag( "--reverse", s.reverse, "Run on the reversed system" );
    app->add_option( "--constraint-mode", s.constraint_mode, "reject, self_loops, dead_end or keep_separate" );
}

void add_limit_options( CLI::App* app, pdr::Limits& l )
{
    app->add_option( "--timeout", l.seconds, "Seconds per run (0: none)" );
    app->add_option( "--max-frames", l.frames, "Frame limit (0: none)" );
    app->add_option( "--max-obligations", l.obligations, "Proof obligation limit (0: none)" );
}

void add_gen_options( CLI::App* app, RunSpec& r )
{
    app->add_option( "--mode", r.mode, "fix or free, for names without a suffix" )->check( CLI::IsMember( { "fix", "free" } ) );
    app->add_option( "--lifting", r.lifting, "Lifting call" )->check( CLI::IsMember( { "auto", "plain", "extended" } ) );
    app->add_flag( "--unsafe", r.unsafe, "Allow plain lifting on relations that are not left-total" );
}

// --- check ---------------------------------------------------------------

int cmd_check( RunSpec spec, const Common& common, const std::string& portfolio, const std::string& witness,
               const std::string& invariant, std::ostream& out, std::ostream& err )
{
    if ( !portfolio.empty() )
        spec.strategies = split_list( portfolio );
    spec.seed = common.seed;
    spec.no_times = common.no_times;

    auto o = run_system( spec );
    {
        auto merged = json{ { "command", "check" } };
        merged.update( o.report );
        o.report = std::move( merged );
    }

    if ( o.code == exit_error || o.code == exit_refused || o.code == exit_unsound )
        err << "pogen: " << o.report[ "message" ].get< std::string >() << '\n';

    if ( !witness.empty() && o.code == exit_unsafe )
        write_file( witness, o.witness );
    if ( !invariant.empty() && o.code == exit_safe )
        write_invariant( invariant, o );

    auto sink = Sink( common.output, out );
    if ( common.report == "json" )
        sink.stream() << o.report.dump( 2 ) << '\n';
    else if ( common.report == "csv" )
        write_csv( sink.stream(), run_columns, { o.report } );
    else
        write_run_text( sink.stream(), o.report );
    sink.flush();
    return o.code;
}

// --- bench ---------------------------------------------------------------

std::vector< std::string > expand_inputs( const std::vector< std::string >& inputs )
{
    auto files = std::vector< std::string >{};
    for ( const auto& in : inputs )
    {
        if ( fs::is_directory( in ) )
        {
            auto found = std::vector< std::string >{};
            for ( const auto& e : fs::directory_iterator( in ) )
            {
                const auto ext = e.path().extension().string();
                if ( e.is_regular_file() && ( ext == ".aag" || ext == ".dimspec" || ext == ".cnf" ) )
                    found.push_back( e.path().string() );
            }
            std::sort( found.begin(), found.end() );
            files.insert( files.end(), found.begin(), found.end() );
        }
        else
            files.push_back( in );
    }
    return files;
}

int cmd_bench( RunSpec base, const Common& common, const std::vector< std::string >& inputs, const std::string& strategies,
               std::ostream& out, std::ostream& err )
{
    const auto files = expand_inputs( inputs );
    const auto names = split_list( strategies );
    if ( files.empty() || names.empty() )
    {
        err << "pogen: nothing to run\n";
        return exit_error;
    }

    auto specs = std::vector< RunSpec >{};
    for ( const auto& f : files )
        for ( const auto& n : names )
        {
            auto s = base;
            s.system.file = f;
            s.strategies = { n };
            s.seed = common.seed;
            s.no_times = common.no_times;
            specs.push_back( std::move( s ) );
        }

    auto reports = std::vector< json >( specs.size() );
    parallel_for( specs.size(), common.jobs, [ & ]( std::size_t i ) { reports[ i ] = run_system( specs[ i ] ).report; } );

    auto errors = std::size_t{ 0 };
    for ( const auto& r : reports )
        if ( r[ "verdict" ] == "error" || r[ "verdict" ] == "unsound" )
        {
            ++errors;
            err << "pogen: " << r[ "file" ].get< std::string >() << ": " << r[ "message" ].get< std::string >() << '\n';
        }

    auto sink = Sink( common.output, out );
    if ( common.report == "json" )
        sink.stream() << json{ { "command", "bench" }, { "seed", common.seed }, { "runs", reports } }.dump( 2 ) << '\n';
    else if ( common.report == "csv" )
        write_csv( sink.stream(), run_columns, reports );
    else
        for ( const auto& r : reports )
            write_run_text( sink.stream(), r );
    sink.flush();
    return errors == 0 ? 0 : exit_error;
}

// --- extract -------------------------------------------------------------

int cmd_extract( RunSpec spec, const Common& common, const std::string& out_dir, const std::string& filter,
                 std::size_t oracle_bound, std::size_t max_count, std::ostream& out, std::ostream& err )
{
    try
    {
        const auto loaded = load_system( spec.system );
        auto cfg = pdr::EngineConfig{};
        cfg.strategy = strategy_for( spec.strategies.front(), spec.mode );
        cfg.gen = gen_options( spec );
        cfg.limits = spec.limits;
        cfg.reverse = spec.system.reverse;

        auto kept = std::vector< std::string >{};
        auto seen = std::size_t{ 0 };
        cfg.on_pogp = [ & ]( const PogpInstance& p ) {
            ++seen;
            if ( filter == "oracle" )
            {
                try
                {
                    if ( brute_force_oracle( p, Mode::fix, oracle_bound ).removed == 0 )
                        return;
                }
                catch ( const oracle_too_large& )
                {
                    return;
                }
            }
            kept.push_back( serialize( p ) );
        };
        const auto verdict = pdr::check( loaded.ts, cfg );

        if ( max_count > 0 && kept.size() > max_count )
        {
            auto sampled = std::vector< std::string >{};
            auto rng = std::mt19937_64( common.seed );
            std::sample( kept.begin(), kept.end(), std::back_inserter( sampled ), max_count, rng );
            kept = std::move( sampled );
        }

        fs::create_directories( out_dir );
        const auto stem = fs::path( spec.system.file ).stem().string();
        for ( std::size_t i = 0; i < kept.size(); ++i )
        {
            auto name = std::ostringstream{};
            name << stem << '-' << std::setw( 5 ) << std::setfill( '0' ) << i << ".pogp";
            write_file( fs::path( out_dir ) / name.str(), kept[ i ] );
        }

        auto sink = Sink( common.output, out );
        const auto report = json{ { "command", "extract" },
                                  { "file", spec.system.file },
                                  { "strategy", to_string( cfg.strategy ) },
                                  { "filter", filter },
                                  { "seed", common.seed },
                                  { "verdict", std::string( pdr::to_string( verdict.result ) ) },
                                  { "seen", seen },
                                  { "written", kept.size() },
                                  { "out", out_dir } };
        if ( common.report == "json" )
            sink.stream() << report.dump( 2 ) << '\n';
        else if ( common.report == "csv" )
            write_csv( sink.stream(),
                       { { "file", "file" }, { "strategy", "strategy" }, { "filter", "filter" }, { "verdict", "verdict" }, { "seen", "seen" }, { "written", "written" } },
                       { report } );
        else
            sink.stream() << kept.size() << " of " << seen << " instances written to " << out_dir << '\n';
        sink.flush();
        return 0;
    }
    catch ( const pdr::soundness_alarm& e )
    {
        err << "pogen: " << e.what() << '\n';
        return exit_unsound;
    }
    catch ( const inapplicable_strategy& e )
    {
        err << "pogen: missing " << e.why().missing << " (" << e.why().reason << ")\n";
        return exit_refused;
    }
}

// --- compare -------------------------------------------------------------

struct Outcome
{
    std::string strategy;
    bool applicable = true;
    std::size_t removed = 0;
    double time = 0.0;
    bool sound = true;
    std::string problem;
};

struct InstanceResult
{
    std::string file;
    std::size_t state_vars = 0;
    std::size_t reference = 0;
    std::optional< std::size_t > oracle;
    std::vector< Outcome > outcomes;
    std::string error;  // unreadable
    std::string failure; // unsound or inconsistent
};

InstanceResult compare_one( const std::string& file, const std::vector< Strategy >& strategies, std::size_t oracle_bound )
{
    auto res = InstanceResult{};
    res.file = file;
    auto p = PogpInstance{};
    try
    {
        p = parse_pogp( read_file( file ) );
        validate( p );
    }
    catch ( const std::exception& e )
    {
        res.error = e.what();
        return res;
    }

    const auto& ts = *p.ts;
    res.state_vars = ts.state.size();
    const auto removed_by = [ & ]( const Cube& c ) { return p.m.size() - c.size(); };

    try
    {
        res.reference = removed_by( gen_max_qbf( p, Mode::fix ) );
        if ( res.state_vars <= oracle_bound )
        {
            res.oracle = brute_force_oracle( p, Mode::fix, oracle_bound ).removed;
            if ( *res.oracle != res.reference )
                res.failure = "max-qbf removed " + std::to_string( res.reference ) + " but the exhaustive optimum is " +
                              std::to_string( *res.oracle );
        }

        for ( const auto s : strategies )
        {
            auto o = Outcome{};
            o.strategy = to_string( s );
            if ( check_applicable( s, ts ) )
            {
                o.applicable = false;
                res.outcomes.push_back( o );
                continue;
            }
            auto ctx = GenContext{};
            const auto g = generalize( s, p, ctx );
            o.removed = g.removed;
            o.time = g.time.count();
            const auto check = verify_po( ts, g.cube, p.d_next, &p.frame );
            o.sound = check.sound;
            if ( !o.sound && res.failure.empty() )
                res.failure = o.strategy + " returned an unsound cube";
            res.outcomes.push_back( o );
        }
    }
    catch ( const std::exception& e )
    {
        res.failure = e.what();
    }
    return res;
}

int cmd_compare( const Common& common, const std::string& dir, const std::string& strategy_list, std::size_t oracle_bound,
                 std::ostream& out, std::ostream& err )
{
    if ( !fs::is_directory( dir ) )
    {
        err << "pogen: " << dir << " is not a directory\n";
        return exit_error;
    }
    auto files = std::vector< std::string >{};
    for ( const auto& e : fs::directory_iterator( dir ) )
        if ( e.path().extension() == ".pogp" )
            files.push_back( e.path().string() );
    std::sort( files.begin(), files.end() );
    if ( files.empty() )
    {
        err << "pogen: no .pogp files in " << dir << '\n';
        return exit_error;
    }

    auto strategies = std::vector< Strategy >{};
    if ( strategy_list.empty() )
        for ( const auto m : all_methods() )
            strategies.push_back( { m, Mode::fix } );
    else
        for ( const auto& n : split_list( strategy_list ) )
            strategies.push_back( parse_strategy( n ) );

    auto results = std::vector< InstanceResult >( files.size() );
    parallel_for( files.size(), common.jobs, [ & ]( std::size_t i ) { results[ i ] = compare_one( files[ i ], strategies, oracle_bound ); } );

    auto failed = false;
    auto skipped = json::array();
    auto instances = json::array();
    auto rows = std::vector< json >{};
    struct Sum
    {
        std::size_t n = 0;
        double ratio = 0.0;
        double performance = 0.0;
    };
    auto sums = std::map< std::string, Sum >{};

    for ( const auto& r : results )
    {
        if ( !r.error.empty() )
        {
            err << "pogen: warning: skipping " << r.file << ": " << r.error << '\n';
            skipped.push_back( r.file );
            continue;
        }
        if ( !r.failure.empty() )
        {
            err << "pogen: " << r.file << ": " << r.failure << '\n';
            failed = true;
        }
        auto entries = json::array();
        for ( const auto& o : r.outcomes )
        {
            auto e = json{ { "file", r.file },
                           { "strategy", o.strategy },
                           { "applicable", o.applicable },
                           { "state_vars", r.state_vars },
                           { "removed", o.removed },
                           { "reference_removed", r.reference },
                           { "reduction_ratio", reduction_ratio( o.removed, r.state_vars ) },
                           { "performance", performance( o.removed, r.reference ) },
                           { "time_s", common.no_times ? 0.0 : o.time },
                           { "sound", o.sound } };
            if ( !o.applicable )
            {
                e[ "removed" ] = nullptr;
                e[ "reduction_ratio" ] = nullptr;
                e[ "performance" ] = nullptr;
            }
            else
            {
                auto& s = sums[ o.strategy ];
                ++s.n;
                s.ratio += reduction_ratio( o.removed, r.state_vars );
                s.performance += performance( o.removed, r.reference );
            }
            rows.push_back( e );
            e.erase( "file" );
            e.erase( "state_vars" );
            e.erase( "reference_removed" );
            entries.push_back( std::move( e ) );
        }
        instances.push_back( json{ { "file", r.file },
                                   { "state_vars", r.state_vars },
                                   { "reference_removed", r.reference },
                                   { "oracle_removed", r.oracle ? json( *r.oracle ) : json( nullptr ) },
                                   { "results", std::move( entries ) } } );
    }

    if ( skipped.size() == files.size() )
    {
        err << "pogen: no readable instance in " << dir << '\n';
        return exit_error;
    }
    if ( failed )
        return exit_unsound;

    auto summary = json::array();
    for ( const auto s : strategies )
    {
        const auto name = to_string( s );
        const auto it = sums.find( name );
        const auto n = it == sums.end() ? 0 : it->second.n;
        summary.push_back( json{ { "strategy", name },
                                 { "instances", n },
                                 { "mean_reduction_ratio", n ? json( it->second.ratio / n ) : json( nullptr ) },
                                 { "mean_performance", n ? json( it->second.performance / n ) : json( nullptr ) } } );
    }

    auto sink = Sink( common.output, out );
    if ( common.report == "json" )
        sink.stream() << json{ { "command", "compare" },
                               { "reference", "max-qbf" },
                               { "oracle_bound", oracle_bound },
                               { "seed", common.seed },
                               { "instances", instances },
                               { "summary", summary },
                               { "skipped", skipped } }
                             .dump( 2 )
                      << '\n';
    else if ( common.report == "csv" )
        write_csv( sink.stream(),
                   { { "file", "file" },
                     { "strategy", "strategy" },
                     { "applicable", "applicable" },
                     { "state_vars", "state_vars" },
                     { "removed", "removed" },
                     { "reference_removed", "reference_removed" },
                     { "reduction_ratio", "reduction_ratio" },
                     { "performance", "performance" },
                     { "time_s", "time_s" },
                     { "sound", "sound" } },
                   rows );
    else
    {
        auto& os = sink.stream();
        os << std::left << std::setw( 16 ) << "strategy" << std::right << std::setw( 10 ) << "instances" << std::setw( 12 )
           << "reduction" << std::setw( 13 ) << "performance" << '\n';
        for ( const auto& s : summary )
        {
            os << std::left << std::setw( 16 ) << s[ "strategy" ].get< std::string >() << std::right << std::setw( 10 )
               << s[ "instances" ].get< std::size_t >();
            if ( s[ "instances" ].get< std::size_t >() == 0 )
                os << std::setw( 12 ) << "n/a" << std::setw( 13 ) << "n/a" << '\n';
            else
                os << std::setw( 11 ) << fixed( 100.0 * s[ "mean_reduction_ratio" ].get< double >(), 1 ) << '%'
                   << std::setw( 12 ) << fixed( 100.0 * s[ "mean_performance" ].get< double >(), 1 ) << "%\n";
        }
    }
    sink.flush();
    return 0;
}

} // namespace

int run( const std::vector< std::string >& args, std::ostream& out, std::ostream& err )
{
    auto app = CLI::App{ "PDR model checker with pluggable proof-obligation generalization", "pogen" };
    app.require_subcommand( 1 );
    app.set_version_flag( "--version", "pogen 0.1.0" );

    auto common = Common{};

    auto check = RunSpec{};
    auto portfolio = std::string{};
    auto strategy = std::string{ "lifting" };
    auto witness = std::string{};
    auto invariant = std::string{};
    auto* c = app.add_subcommand( "check", "Model check an AIGER or DIMSPEC file" );
    c->add_option( "file", check.system.file, "Input file" )->required();
    c->add_option( "-s,--strategy", strategy, "PO generalization strategy" );
    c->add_option( "--portfolio", portfolio, "Comma-separated strategies run concurrently" );
    c->add_option( "--witness", witness, "Write an AIGER witness here when unsafe" );
    c->add_option( "--invariant", invariant, "Write the invariant as DIMACS here when safe" );
    add_system_options( c, check.system );
    add_gen_options( c, check );
    add_limit_options( c, check.limits );
    add_report_options( c, common );

    auto extract = RunSpec{};
    auto out_dir = std::string{};
    auto filter = std::string{ "none" };
    auto extract_strategy = std::string{ "lifting" };
    auto bound = std::size_t{ 12 };
    auto max_count = std::size_t{ 0 };
    auto* x = app.add_subcommand( "extract", "Write the PO generalization problems of a run as .pogp files" );
    x->add_option( "file", extract.system.file, "Input file" )->required();
    x->add_option( "--out", out_dir, "Output directory" )->required();
    x->add_option( "-s,--strategy", extract_strategy, "Strategy of the run" );
    x->add_option( "--filter", filter, "none, or oracle: keep instances the exact optimum can shrink" )
        ->check( CLI::IsMember( { "none", "oracle" } ) );
    x->add_option( "--oracle-bound", bound, "Largest state count for the exhaustive oracle" );
    x->add_option( "--max", max_count, "Keep a random sample of at most this many (0: all)" );
    add_system_options( x, extract.system );
    add_gen_options( x, extract );
    add_limit_options( x, extract.limits );
    add_report_options( x, common );

    auto dir = std::string{};
    auto compare_strategies = std::string{};
    auto compare_bound = std::size_t{ 12 };
    auto* k = app.add_subcommand( "compare", "Run strategies on a directory of .pogp files against the optimum" );
    k->add_option( "dir", dir, "Directory of .pogp files" )->required();
    k->add_option( "--strategies", compare_strategies, "Comma-separated strategies (default: all, fix mode)" );
    k->add_option( "--oracle-bound", compare_bound, "Cross-check the optimum exhaustively up to this many state variables" );
    k->add_option( "-j,--jobs", common.jobs, "Worker threads (0: all cores)" );
    add_report_options( k, common );

    auto bench = RunSpec{};
    auto inputs = std::vector< std::string >{};
    auto bench_strategies = std::string{ "lifting,igbg,ms01x" };
    auto* b = app.add_subcommand( "bench", "Check many files with several strategies" );
    b->add_option( "inputs", inputs, "Files or directories" )->required();
    b->add_option( "--strategies", bench_strategies, "Comma-separated strategies" );
    b->add_option( "-j,--jobs", common.jobs, "Worker threads (0: all cores)" );
    add_system_options( b, bench.system );
    add_gen_options( b, bench );
    add_limit_options( b, bench.limits );
    add_report_options( b, common );

    auto argv = std::vector< const char* >{};
    for ( const auto& a : args )
        argv.push_back( a.c_str() );

    try
    {
        app.parse( static_cast< int >( argv.size() ), argv.data() );
    }
    catch ( const CLI::ParseError& e )
    {
        const auto code = app.exit( e, out, err );
        return code == 0 ? 0 : exit_error;
    }

    try
    {
        if ( *c )
        {
            check.strategies = { strategy };
            check.system.constraint_mode_given = c->get_option( "--constraint-mode" )->count() > 0;
            return cmd_check( check, common, portfolio, witness, invariant, out, err );
        }
        if ( *x )
        {
            extract.strategies = { extract_strategy };
            extract.system.constraint_mode_given = x->get_option( "--constraint-mode" )->count() > 0;
            return cmd_extract( extract, common, out_dir, filter, bound, max_count, out, err );
        }
        if ( *k )
            return cmd_compare( common, dir, compare_strategies, compare_bound, out, err );
        if ( *b )
        {
            bench.system.constraint_mode_given = b->get_option( "--constraint-mode" )->count() > 0;
            return cmd_bench( bench, common, inputs, bench_strategies, out, err );
        }
    }
    catch ( const std::exception& e )
    {
        err << "pogen: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}

} // namespace pogen::cli
