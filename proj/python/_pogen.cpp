#include "cli.hpp"

#include "pogen/metrics.hpp"
#include "pogen/oracle.hpp"
#include "pogen/pdr.hpp"
#include "pogen/pogp.hpp"
#include "pogen/strategies.hpp"
#include "pogen/transition_system.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace pogen;

namespace
{

using Ints = std::vector< int >;

Ints ints( const Cube& c )
{
    auto v = Ints{};
    for ( const auto l : c )
        v.push_back( l.to_dimacs() );
    return v;
}

Cube cube( const Ints& v )
{
    auto lits = std::vector< Lit >{};
    for ( const auto x : v )
        lits.push_back( Lit::from_dimacs( x ) );
    return Cube( std::move( lits ) );
}

std::vector< Ints > clauses( const std::vector< Clause >& cs )
{
    auto out = std::vector< Ints >{};
    for ( const auto& c : cs )
    {
        auto& row = out.emplace_back();
        for ( const auto l : c )
            row.push_back( l.to_dimacs() );
    }
    return out;
}

// pybind11 holders cannot be pointers to const
using System = std::shared_ptr< TransitionSystem >;

System from_aiger( const std::string& text, const std::string& constraint_mode )
{
    const auto mode = parse_constraint_mode( constraint_mode );
    if ( !mode )
        throw std::invalid_argument( "unknown constraint mode '" + constraint_mode + "'" );
    return std::make_shared< TransitionSystem >( circuit_to_ts( parse_aiger( text ), *mode ) );
}

GenOptions gen_options( const std::string& lifting, bool unsafe )
{
    auto o = GenOptions{};
    if ( lifting == "plain" )
        o.lifting = LiftingCall::plain;
    else if ( lifting == "extended" )
        o.lifting = LiftingCall::extended;
    else if ( lifting != "auto" )
        throw std::invalid_argument( "lifting must be auto, plain or extended" );
    o.unsafe = unsafe;
    return o;
}

py::dict stats_dict( const pdr::EngineStats& s )
{
    auto d = py::dict{};
    d[ "frames" ] = s.frames;
    d[ "clauses" ] = s.clauses;
    d[ "mean_clause_size" ] = s.mean_clause_size();
    d[ "obligations" ] = s.obligations;
    d[ "generalizations" ] = s.generalizations;
    d[ "removed_literals" ] = s.removed_literals;
    d[ "sat_calls" ] = s.sat_calls;
    d[ "generalization_time" ] = s.generalization_time.count();
    d[ "total_time" ] = s.total_time.count();
    d[ "generalization_share" ] = s.generalization_share();
    d[ "reduction_ratio" ] = s.reduction_ratio();
    return d;
}

py::dict verdict_dict( const TransitionSystem& ts, const pdr::Verdict& v )
{
    auto d = py::dict{};
    d[ "result" ] = std::string( pdr::to_string( v.result ) );
    d[ "strategy" ] = v.strategy;
    d[ "reason" ] = v.reason;
    d[ "reversed" ] = v.reversed;
    d[ "invariant" ] = clauses( v.invariant );
    auto trace = py::list{};
    for ( const auto& step : v.trace )
        trace.append( py::make_tuple( ints( step.state ), ints( step.input ) ) );
    d[ "trace" ] = trace;
    d[ "witness" ] = v.result == pdr::Result::unsafe ? pdr::aiger_witness( ts, v.trace ) : std::string{};
    d[ "stats" ] = stats_dict( v.stats );
    return d;
}

pdr::EngineConfig engine_config( const std::string& strategy, bool reverse, double timeout, std::size_t max_frames,
                                 const std::string& lifting, bool unsafe )
{
    auto cfg = pdr::EngineConfig{};
    cfg.strategy = parse_strategy( strategy );
    cfg.gen = gen_options( lifting, unsafe );
    cfg.reverse = reverse;
    cfg.limits.seconds = timeout;
    cfg.limits.frames = max_frames;
    return cfg;
}

} // namespace

PYBIND11_MODULE( _pogen, m )
{
    m.doc() = "Bindings of the pogen model checker";

    py::register_exception< unknown_strategy >( m, "UnknownStrategy", PyExc_ValueError );
    py::register_exception< inapplicable_strategy >( m, "InapplicableStrategy", PyExc_ValueError );
    py::register_exception< invalid_pogp >( m, "InvalidPogp", PyExc_ValueError );
    py::register_exception< parse_error >( m, "ParseError", PyExc_ValueError );
    py::register_exception< oracle_too_large >( m, "OracleTooLarge", PyExc_ValueError );
    py::register_exception< pdr::soundness_alarm >( m, "SoundnessAlarm", PyExc_RuntimeError );

    py::class_< TransitionSystem, System >( m, "TransitionSystem" )
        .def_static( "from_aiger", &from_aiger, py::arg( "text" ), py::arg( "constraint_mode" ) = "keep_separate" )
        .def_static( "from_dimspec", []( const std::string& text ) -> System {
            return std::make_shared< TransitionSystem >( parse_dimspec( text ) );
        } )
        .def( "reversed", []( const TransitionSystem& ts ) -> System { return std::make_shared< TransitionSystem >( reverse( ts ) ); } )
        .def_property_readonly( "state", []( const TransitionSystem& ts ) { return ts.state; } )
        .def_property_readonly( "inputs", []( const TransitionSystem& ts ) { return ts.input; } )
        .def_property_readonly( "next", []( const TransitionSystem& ts ) { return ts.next; } )
        .def_property_readonly( "origin", []( const TransitionSystem& ts ) { return std::string( to_string( ts.origin ) ); } )
        .def_property_readonly( "has_constraint", &TransitionSystem::has_constraint )
        .def_property_readonly( "caps", []( const TransitionSystem& ts ) {
            auto d = py::dict{};
            d[ "right_unique" ] = std::string( to_string( ts.caps.right_unique ) );
            d[ "left_total" ] = std::string( to_string( ts.caps.left_total ) );
            d[ "left_unique" ] = std::string( to_string( ts.caps.left_unique ) );
            d[ "right_total" ] = std::string( to_string( ts.caps.right_total ) );
            return d;
        } );

    py::class_< PogpInstance >( m, "PogpInstance" )
        .def_static( "parse", []( const std::string& text ) { return parse_pogp( text ); } )
        .def( "serialize", []( const PogpInstance& p ) { return serialize( p ); } )
        .def( "problems", []( const PogpInstance& p ) { return pogp_problems( p ); } )
        .def( "validate", []( const PogpInstance& p ) { validate( p ); } )
        .def_property_readonly( "system", []( const PogpInstance& p ) { return std::const_pointer_cast< TransitionSystem >( p.ts ); } )
        .def_property_readonly( "m", []( const PogpInstance& p ) { return ints( p.m ); } )
        .def_property_readonly( "i", []( const PogpInstance& p ) { return ints( p.i ); } )
        .def_property_readonly( "d", []( const PogpInstance& p ) { return ints( p.d ); } )
        .def_property_readonly( "d_next", []( const PogpInstance& p ) { return ints( p.d_next ); } )
        .def_property_readonly( "t_next", []( const PogpInstance& p ) { return ints( p.t_next ); } )
        .def_property_readonly( "level", []( const PogpInstance& p ) { return p.level; } );

    m.def( "strategy_names", [] {
        auto names = std::vector< std::string >{};
        for ( const auto method : all_methods() )
        {
            names.emplace_back( to_string( method ) );
            if ( supports_free( method ) )
                names.push_back( std::string( to_string( method ) ) + ":free" );
        }
        return names;
    } );

    m.def(
        "check_applicable",
        []( const std::string& strategy, const TransitionSystem& ts, const std::string& lifting, bool unsafe ) -> py::object {
            const auto why = check_applicable( parse_strategy( strategy ), ts, gen_options( lifting, unsafe ) );
            if ( !why )
                return py::none();
            return py::make_tuple( why->missing, why->reason );
        },
        py::arg( "strategy" ), py::arg( "system" ), py::arg( "lifting" ) = "auto", py::arg( "unsafe" ) = false,
        "None when applicable, else (missing capability, reason)" );

    m.def(
        "check",
        []( const System& ts, const std::string& strategy, bool reverse, double timeout, std::size_t max_frames,
            const std::string& lifting, bool unsafe ) {
            const auto cfg = engine_config( strategy, reverse, timeout, max_frames, lifting, unsafe );
            auto v = pdr::Verdict{};
            {
                py::gil_scoped_release release;
                v = pdr::check( ts, cfg );
            }
            return verdict_dict( *ts, v );
        },
        py::arg( "system" ), py::arg( "strategy" ) = "lifting", py::arg( "reverse" ) = false, py::arg( "timeout" ) = 0.0,
        py::arg( "max_frames" ) = 0, py::arg( "lifting" ) = "auto", py::arg( "unsafe" ) = false );

    m.def(
        "portfolio",
        []( const System& ts, const std::vector< std::string >& strategies, bool reverse, double timeout ) {
            auto configs = std::vector< pdr::EngineConfig >{};
            for ( const auto& s : strategies )
                configs.push_back( engine_config( s, reverse, timeout, 0, "auto", false ) );
            auto v = pdr::Verdict{};
            {
                py::gil_scoped_release release;
                v = pdr::portfolio( ts, configs );
            }
            return verdict_dict( *ts, v );
        },
        py::arg( "system" ), py::arg( "strategies" ), py::arg( "reverse" ) = false, py::arg( "timeout" ) = 0.0 );

    m.def(
        "extract",
        []( const System& ts, const std::string& strategy, bool reverse, std::size_t max_frames ) {
            auto cfg = engine_config( strategy, reverse, 0.0, max_frames, "auto", false );
            auto texts = std::vector< std::string >{};
            cfg.on_pogp = [ & ]( const PogpInstance& p ) { texts.push_back( serialize( p ) ); };
            {
                py::gil_scoped_release release;
                pdr::check( ts, cfg );
            }
            return texts;
        },
        py::arg( "system" ), py::arg( "strategy" ) = "lifting", py::arg( "reverse" ) = false, py::arg( "max_frames" ) = 0,
        "Serialized PO generalization problems of one run" );

    m.def(
        "generalize",
        []( const PogpInstance& p, const std::string& strategy ) {
            auto ctx = GenContext{};
            const auto r = generalize( parse_strategy( strategy ), p, ctx );
            auto d = py::dict{};
            d[ "cube" ] = ints( r.cube );
            d[ "removed" ] = r.removed;
            d[ "time" ] = r.time.count();
            return d;
        },
        py::arg( "instance" ), py::arg( "strategy" ) );

    m.def(
        "verify_po",
        []( const PogpInstance& p, const Ints& c ) -> py::tuple {
            const auto r = verify_po( *p.ts, cube( c ), p.d_next, &p.frame );
            return py::make_tuple( r.sound, r.witness ? py::cast( ints( *r.witness ) ) : py::none() );
        },
        py::arg( "instance" ), py::arg( "cube" ), "(sound, witness state or None)" );

    m.def(
        "oracle",
        []( const PogpInstance& p, const std::string& mode, std::size_t bound ) {
            const auto r = brute_force_oracle( p, mode == "free" ? Mode::free : Mode::fix, bound );
            return py::make_tuple( ints( r.cube ), r.removed );
        },
        py::arg( "instance" ), py::arg( "mode" ) = "fix", py::arg( "bound" ) = 12 );

    m.def( "reduction_ratio", &reduction_ratio, py::arg( "removed" ), py::arg( "state_vars" ) );
    m.def( "performance", &performance, py::arg( "removed" ), py::arg( "optimal" ) );

    m.def(
        "run_cli",
        []( const std::vector< std::string >& args ) {
            auto out = std::ostringstream{};
            auto err = std::ostringstream{};
            auto argv = args;
            argv.insert( argv.begin(), "pogen" );
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::run( argv, out, err );
            }
            return py::make_tuple( code, out.str(), err.str() );
        },
        py::arg( "args" ), "Runs the command-line tool in process; returns (exit code, stdout, stderr)" );
}
