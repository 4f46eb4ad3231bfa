#include "cli.hpp"
#include "support.hpp"

#include "pogen/pogp.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pogen;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace
{

struct Run
{
    int code = -1;
    std::string out;
    std::string err;
};

Run pogen_cli( std::vector< std::string > args )
{
    args.insert( args.begin(), "pogen" );
    auto out = std::ostringstream{};
    auto err = std::ostringstream{};
    const auto code = cli::run( args, out, err );
    return { code, out.str(), err.str() };
}

std::string fixture_path( const std::string& name )
{
    return std::string( POGEN_SOURCE_DIR ) + "/fixtures/" + name;
}

// A fresh directory below the system temp dir, removed on destruction.
class TempDir
{
public:
    explicit TempDir( const std::string& tag )
        : _path{ fs::temp_directory_path() / ( "pogen-cli-" + tag + "-" + std::to_string( std::rand() ) ) }
    {
        fs::remove_all( _path );
        fs::create_directories( _path );
    }
    ~TempDir() { fs::remove_all( _path ); }
    TempDir( const TempDir& ) = delete;
    TempDir& operator=( const TempDir& ) = delete;

    const fs::path& path() const { return _path; }
    std::string str() const { return _path.string(); }

private:
    fs::path _path;
};

std::string slurp( const fs::path& p )
{
    auto in = std::ifstream( p );
    auto ss = std::ostringstream{};
    ss << in.rdbuf();
    return ss.str();
}

std::vector< std::string > lines_of( const std::string& text )
{
    auto lines = std::vector< std::string >{};
    auto ss = std::istringstream( text );
    for ( std::string l; std::getline( ss, l ); )
        lines.push_back( l );
    return lines;
}

test::Bits parse_bits( const std::string& s )
{
    auto b = test::Bits{};
    for ( const char c : s )
        b.push_back( c == '1' );
    return b;
}

// Simulates an AIGER witness on the circuit; true when it ends in a bad
// state with every constraint kept on the way.
bool witness_reaches_bad( const Circuit& c, const std::string& witness )
{
    const auto lines = lines_of( witness );
    if ( lines.size() < 4 || lines[ 0 ] != "1" || lines[ 1 ] != "b0" || lines.back() != "." )
        return false;
    auto state = parse_bits( lines[ 2 ] );
    if ( state.size() != c.latches.size() )
        return false;
    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        if ( state[ k ] != c.latches[ k ].init )
            return false;

    const auto value = [ & ]( const std::vector< bool >& nodes, AigLit l ) { return nodes[ l.var() ] != l.negated(); };
    for ( std::size_t step = 3; step + 1 < lines.size(); ++step )
    {
        auto nodes = std::vector< bool >{};
        const auto next = evaluate( c, state, parse_bits( lines[ step ] ), &nodes );
        for ( const auto l : c.constraints )
            if ( !value( nodes, l ) )
                return false;
        if ( step + 2 == lines.size() )
            return value( nodes, c.bad_literals().front() );
        state = next;
    }
    return false;
}

json parse_report( const Run& r )
{
    return json::parse( r.out );
}

} // namespace

TEST_CASE( "check reports the verdict of explicit-state search" )
{
    for ( const auto* name : { "sys_a.aag", "sys_c.aag", "counter2.aag" } )
    {
        CAPTURE( name );
        const auto c = parse_aiger( test::fixture( name ) );
        const auto depth = test::bfs_bad_depth( c );

        const auto dir = TempDir( "check" );
        const auto witness = ( dir.path() / "w.txt" ).string();
        const auto r = pogen_cli( { "check", fixture_path( name ), "--report", "json", "--witness", witness } );
        const auto report = parse_report( r );
        if ( depth )
        {
            CHECK( r.code == cli::exit_unsafe );
            CHECK( report[ "verdict" ] == "unsafe" );
            CHECK( report[ "trace_length" ].get< int >() == *depth + 1 );
            CHECK( witness_reaches_bad( c, slurp( witness ) ) );
        }
        else
        {
            CHECK( r.code == cli::exit_safe );
            CHECK( report[ "verdict" ] == "safe" );
        }
        const auto share = report[ "generalization" ][ "time_share" ].get< double >();
        const auto ratio = report[ "generalization" ][ "reduction_ratio" ].get< double >();
        CHECK( share >= 0.0 );
        CHECK( share <= 1.0 );
        CHECK( ratio >= 0.0 );
        CHECK( ratio <= 1.0 );
    }
}

TEST_CASE( "safe runs write a DIMACS invariant" )
{
    const auto dir = TempDir( "inv" );
    const auto aag = dir.path() / "stuck.aag";
    // one latch that stays 0, bad when it is 1
    std::ofstream( aag ) << "aag 1 0 1 1 0\n2 2\n2\n";
    const auto inv = ( dir.path() / "inv.cnf" ).string();
    const auto r = pogen_cli( { "check", aag.string(), "--invariant", inv } );
    CHECK( r.code == cli::exit_safe );
    const auto text = slurp( inv );
    CHECK( text.rfind( "p cnf ", 0 ) == 0 );
}

TEST_CASE( "plain lifting on a constrained circuit is refused" )
{
    const auto r = pogen_cli( { "check", fixture_path( "sys_c.aag" ), "--lifting", "plain" } );
    CHECK( r.code == cli::exit_refused );
    CHECK( r.err.find( "left-total" ) != std::string::npos );

    // the extended call, the default for kept constraints, is fine
    CHECK( pogen_cli( { "check", fixture_path( "sys_c.aag" ) } ).code == cli::exit_unsafe );
}

TEST_CASE( "portfolio agrees with single strategies" )
{
    for ( const auto* name : { "sys_a.aag", "sys_c.aag", "counter2.aag" } )
    {
        CAPTURE( name );
        const auto f = fixture_path( name );
        const auto p = pogen_cli( { "check", f, "--portfolio", "ms01x,igbg" } ).code;
        CHECK( p == pogen_cli( { "check", f, "--strategy", "ms01x" } ).code );
        CHECK( p == pogen_cli( { "check", f, "--strategy", "igbg" } ).code );
    }
}

TEST_CASE( "free mode and reverse runs" )
{
    const auto f = fixture_path( "counter2.aag" );
    CHECK( pogen_cli( { "check", f, "--strategy", "ms01x", "--mode", "free" } ).code == cli::exit_unsafe );
    CHECK( pogen_cli( { "check", f, "--strategy", "structural", "--reverse" } ).code == cli::exit_unsafe );
    // constraints are repaired before reversal unless the user insists
    CHECK( pogen_cli( { "check", fixture_path( "sys_c.aag" ), "--reverse", "-s", "greedy-qbf" } ).code == cli::exit_unsafe );
    // the reversed relation is not known to be right-unique
    CHECK( pogen_cli( { "check", fixture_path( "sys_c.aag" ), "--reverse", "-s", "lifting" } ).code == cli::exit_refused );
    CHECK( pogen_cli( { "check", fixture_path( "sys_c.aag" ), "--reverse", "-s", "greedy-qbf", "--constraint-mode",
                        "keep_separate" } ).code ==
           cli::exit_error );
}

TEST_CASE( "limits give unknown" )
{
    const auto r = pogen_cli( { "check", fixture_path( "counter2.aag" ), "--max-frames", "1", "--report", "json" } );
    CHECK( r.code == cli::exit_unknown );
    CHECK( parse_report( r )[ "verdict" ] == "unknown" );
}

TEST_CASE( "errors exit above 2" )
{
    CHECK( pogen_cli( { "check", "/nonexistent/file.aag" } ).code > 2 );
    CHECK( pogen_cli( { "check", fixture_path( "sys_a.aag" ), "--strategy", "nonsense" } ).code > 2 );
    CHECK( pogen_cli( { "check", fixture_path( "sys_a.aag" ), "--strategy", "igbg:free" } ).code > 2 );
    CHECK( pogen_cli( { "frobnicate" } ).code > 2 );
}

TEST_CASE( "csv column order is fixed" )
{
    const auto r = pogen_cli( { "check", fixture_path( "sys_a.aag" ), "--report", "csv" } );
    const auto lines = lines_of( r.out );
    REQUIRE( lines.size() == 2 );
    CHECK( lines[ 0 ] ==
           "file,strategies,winner,reverse,constraint_mode,verdict,exit_code,wall_time_s,frames,clauses,"
           "mean_clause_size,obligations,generalizations,generalization_time_share,reduction_ratio" );
    CHECK( lines[ 1 ].find( ",unsafe,1," ) != std::string::npos );
}

TEST_CASE( "seed falls back to the environment" )
{
    ::setenv( "POGEN_SEED", "4242", 1 );
    const auto r = pogen_cli( { "check", fixture_path( "sys_a.aag" ), "--report", "json" } );
    ::unsetenv( "POGEN_SEED" );
    CHECK( parse_report( r )[ "seed" ] == 4242 );
    const auto explicit_seed = pogen_cli( { "check", fixture_path( "sys_a.aag" ), "--report", "json", "--seed", "7" } );
    CHECK( parse_report( explicit_seed )[ "seed" ] == 7 );
}

TEST_CASE( "compare on the fixture instances" )
{
    const auto dir = TempDir( "cmp" );

    SUBCASE( "SYS-B" )
    {
        fs::copy_file( fixture_path( "sys_b.pogp" ), dir.path() / "sys_b.pogp" );
        const auto r = pogen_cli( { "compare", dir.str(), "--strategies", "greedy_cover,greedy_qbf", "--report", "json" } );
        REQUIRE( r.code == 0 );
        const auto j = parse_report( r );
        const auto& res = j[ "instances" ][ 0 ][ "results" ];
        CHECK( res[ 0 ][ "removed" ] == 0 );
        CHECK( res[ 1 ][ "removed" ] == 1 );
        CHECK( res[ 0 ][ "performance" ].get< double >() == doctest::Approx( 0.0 ).epsilon( 1e-3 ) );
        CHECK( res[ 1 ][ "performance" ].get< double >() == doctest::Approx( 1.0 ).epsilon( 1e-3 ) );
        CHECK( j[ "instances" ][ 0 ][ "oracle_removed" ] == 1 );
    }

    SUBCASE( "SYS-A" )
    {
        fs::copy_file( fixture_path( "sys_a.pogp" ), dir.path() / "sys_a.pogp" );
        const auto r = pogen_cli( { "compare", dir.str(), "--strategies", "max-qbf,greedy-cover", "--report", "json" } );
        REQUIRE( r.code == 0 );
        const auto j = parse_report( r );
        const auto& res = j[ "instances" ][ 0 ][ "results" ];
        CHECK( res[ 0 ][ "removed" ] == 2 );
        CHECK( res[ 1 ][ "removed" ] == 1 );
        CHECK( res[ 1 ][ "performance" ].get< double >() == doctest::Approx( 0.5 ).epsilon( 1e-3 ) );
        CHECK( res[ 1 ][ "reduction_ratio" ].get< double >() == doctest::Approx( 0.5 ).epsilon( 1e-3 ) );
        CHECK( j[ "summary" ][ 1 ][ "mean_performance" ].get< double >() == doctest::Approx( 0.5 ).epsilon( 1e-3 ) );
    }

    SUBCASE( "fix-mode performance never exceeds one" )
    {
        fs::copy_file( fixture_path( "sys_a.pogp" ), dir.path() / "sys_a.pogp" );
        fs::copy_file( fixture_path( "sys_b.pogp" ), dir.path() / "sys_b.pogp" );
        const auto j = parse_report( pogen_cli( { "compare", dir.str(), "--report", "json", "--jobs", "2" } ) );
        for ( const auto& s : j[ "summary" ] )
            if ( !s[ "mean_performance" ].is_null() )
                CHECK( s[ "mean_performance" ].get< double >() <= 1.0 );
    }

    SUBCASE( "empty directory" )
    {
        const auto r = pogen_cli( { "compare", dir.str() } );
        CHECK( r.code > 2 );
    }

    SUBCASE( "unreadable instances are skipped" )
    {
        fs::copy_file( fixture_path( "sys_b.pogp" ), dir.path() / "sys_b.pogp" );
        std::ofstream( dir.path() / "broken.pogp" ) << "not a pogp file\n";
        auto r = pogen_cli( { "compare", dir.str(), "--strategies", "greedy-qbf" } );
        CHECK( r.code == 0 );
        CHECK( r.err.find( "skipping" ) != std::string::npos );

        fs::remove( dir.path() / "sys_b.pogp" );
        r = pogen_cli( { "compare", dir.str(), "--strategies", "greedy-qbf" } );
        CHECK( r.code > 2 );
    }
}

TEST_CASE( "extract writes valid, reproducible instances" )
{
    const auto a = TempDir( "exa" );
    const auto b = TempDir( "exb" );
    const auto r = pogen_cli( { "extract", fixture_path( "counter2.aag" ), "--out", a.str(), "--report", "json" } );
    REQUIRE( r.code == 0 );
    const auto written = parse_report( r )[ "written" ].get< std::size_t >();
    CHECK( written >= 1 );

    auto count = std::size_t{ 0 };
    for ( const auto& e : fs::directory_iterator( a.path() ) )
    {
        ++count;
        const auto text = slurp( e.path() );
        const auto p = parse_pogp( text );
        CHECK_NOTHROW( validate( p ) );
        CHECK( serialize( p ) == text );
    }
    CHECK( count == written );

    // a seeded sample is the same every time
    const auto c = TempDir( "exc" );
    pogen_cli( { "extract", fixture_path( "sys_a.aag" ), "--strategy", "igbg", "--out", b.str(), "--max", "1", "--seed", "3" } );
    pogen_cli( { "extract", fixture_path( "sys_a.aag" ), "--strategy", "igbg", "--out", c.str(), "--max", "1", "--seed", "3" } );
    for ( const auto& e : fs::directory_iterator( b.path() ) )
        CHECK( slurp( e.path() ) == slurp( c.path() / e.path().filename() ) );
}

TEST_CASE( "bench runs every file with every strategy" )
{
    const auto r = pogen_cli( { "bench", fixture_path( "sys_a.aag" ), fixture_path( "counter2.aag" ), "--strategies",
                                "lifting,ms01x", "--jobs", "2", "--report", "json", "--no-times" } );
    REQUIRE( r.code == 0 );
    const auto j = parse_report( r );
    REQUIRE( j[ "runs" ].size() == 4 );
    CHECK( j[ "runs" ][ 0 ][ "strategies" ][ 0 ] == "lifting" );
    CHECK( j[ "runs" ][ 1 ][ "strategies" ][ 0 ] == "ms01x" );
    for ( const auto& run : j[ "runs" ] )
        CHECK( run[ "verdict" ] == "unsafe" );

    // single worker and fixed times: the report is reproducible
    const auto again = pogen_cli( { "bench", fixture_path( "sys_a.aag" ), fixture_path( "counter2.aag" ), "--strategies",
                                    "lifting,ms01x", "--report", "json", "--no-times" } );
    CHECK( again.out == r.out );
}
