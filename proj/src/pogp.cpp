#include "pogen/pogp.hpp"

#include "pogen/circuit.hpp"
#include "pogen/sat.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace pogen
{

namespace
{

Var top_var( const PogpInstance& p )
{
    return std::max( p.ts->num_vars, p.frame.num_vars() );
}

bool covers_exactly( const Cube& c, const std::vector< Var >& vars )
{
    if ( c.size() != vars.size() )
        return false;
    return std::all_of( vars.begin(), vars.end(), [ & ]( Var v ) { return c.contains_var( v ); } );
}

// Variables of T other than state variables.
std::vector< Var > trans_vars( const TransitionSystem& ts )
{
    auto seen = std::vector< char >( static_cast< std::size_t >( ts.num_vars ) + 1, 0 );
    for ( const auto v : ts.input )
        seen[ v ] = 1;
    for ( const auto v : ts.next )
        seen[ v ] = 1;
    const auto full = ts.full_trans();
    for ( const auto& c : full.clauses() )
        for ( const auto l : c )
            seen[ l.var() ] = 1;
    for ( const auto v : ts.state )
        seen[ v ] = 0;

    auto out = std::vector< Var >{};
    for ( Var v = 1; v <= ts.num_vars; ++v )
        if ( seen[ v ] )
            out.push_back( v );
    return out;
}

} // namespace

Assignment full_model( const PogpInstance& p )
{
    auto values = Assignment( static_cast< std::size_t >( top_var( p ) ) + 1 );

    if ( !p.aux.empty() )
    {
        for ( const auto* c : { &p.m, &p.i, &p.t_next, &p.aux } )
            apply( *c, values );
        return values;
    }

    auto solver = sat::Solver{ top_var( p ) };
    solver.add_cnf( p.ts->full_trans() );

    auto assumptions = std::vector< Lit >{};
    for ( const auto* c : { &p.m, &p.i, &p.t_next } )
        assumptions.insert( assumptions.end(), c->begin(), c->end() );

    if ( solver.solve( assumptions ) != sat::Status::sat )
        throw invalid_pogp( "m ∧ i ∧ t′ does not satisfy T" );

    values = solver.model();
    values.resize( static_cast< std::size_t >( top_var( p ) ) + 1 );
    return values;
}

Cube non_state_part( const PogpInstance& p, const Assignment& model )
{
    auto lits = std::vector< Lit >{};
    for ( const auto v : trans_vars( *p.ts ) )
        lits.emplace_back( v, !model[ v ] );
    return Cube{ std::move( lits ) };
}

std::vector< std::string > pogp_problems( const PogpInstance& p )
{
    auto out = std::vector< std::string >{};
    if ( !p.ts )
        return { "no transition system" };

    const auto& ts = *p.ts;

    if ( !covers_exactly( p.m, ts.state ) )
        out.push_back( "m is not a full cube over the state variables" );
    if ( !covers_exactly( p.i, ts.input ) )
        out.push_back( "i is not a full cube over the input variables" );
    if ( !covers_exactly( p.t_next, ts.next ) )
        out.push_back( "t′ is not a full cube over the next-state variables" );

    for ( const auto l : p.d )
        if ( ts.state_pos( l.var() ) < 0 )
            out.push_back( "d mentions a non-state variable" );
    for ( const auto l : p.d_next )
        if ( ts.next_pos( l.var() ) < 0 )
            out.push_back( "d′ mentions a non-next-state variable" );
    for ( const auto& c : p.frame.clauses() )
        for ( const auto l : c )
            if ( ts.state_pos( l.var() ) < 0 )
                out.push_back( "frame clause " + to_string( c ) + " mentions a non-state variable" );

    if ( !out.empty() )
        return out;

    if ( !subsumes( p.d_next, p.t_next ) )
        out.push_back( "t′ does not imply d′" );

    auto values = Assignment( static_cast< std::size_t >( top_var( p ) ) + 1 );
    apply( p.m, values );
    if ( !p.frame.eval( values ) )
        out.push_back( "m violates the frame" );
    if ( !p.d.empty() && eval( p.d, values ) )
        out.push_back( "m lies inside d" );

    try
    {
        const auto model = full_model( p );
        if ( !p.ts->full_trans().eval( model ) )
            out.push_back( "m ∧ i ∧ t′ ∧ aux does not satisfy T" );
    }
    catch ( const invalid_pogp& e )
    {
        out.push_back( e.what() );
    }

    return out;
}

void validate( const PogpInstance& p )
{
    const auto problems = pogp_problems( p );
    if ( problems.empty() )
        return;

    auto msg = std::string{ "invalid POGP instance" };
    for ( const auto& s : problems )
        msg += "; " + s;
    throw invalid_pogp( msg );
}

namespace
{

void write_list( std::ostream& os, std::string_view key, std::span< const Var > vars )
{
    os << key;
    for ( const auto v : vars )
        os << ' ' << v;
    os << " 0\n";
}

void write_cube( std::ostream& os, std::string_view key, const Cube& c )
{
    os << key;
    for ( const auto l : c )
        os << ' ' << l.to_dimacs();
    os << " 0\n";
}

void write_cnf( std::ostream& os, std::string_view key, const Cnf& f )
{
    os << key << " cnf " << f.num_vars() << ' ' << f.size() << '\n';
    for ( const auto& c : f.clauses() )
    {
        for ( const auto l : c )
            os << l.to_dimacs() << ' ';
        os << "0\n";
    }
}

std::string_view origin_name( Origin o )
{
    return to_string( o );
}

std::optional< Origin > parse_origin( std::string_view s )
{
    for ( const auto o : { Origin::circuit, Origin::circuit_constraint, Origin::dimspec, Origin::reversed } )
        if ( to_string( o ) == s )
            return o;
    return std::nullopt;
}

std::optional< Tri > parse_tri( std::string_view s )
{
    for ( const auto t : { Tri::no, Tri::yes, Tri::unknown } )
        if ( to_string( t ) == s )
            return t;
    return std::nullopt;
}

class Reader
{
public:
    explicit Reader( std::string_view text ) : _text{ text } {}

    bool next_line( std::string_view& line )
    {
        while ( _pos < _text.size() )
        {
            const auto end = std::min( _text.find( '\n', _pos ), _text.size() );
            line = _text.substr( _pos, end - _pos );
            _pos = end + 1;
            ++_line;
            if ( !line.empty() && line.back() == '\r' )
                line.remove_suffix( 1 );
            if ( line.empty() || ( line.front() == 'c' && ( line.size() == 1 || line[ 1 ] == ' ' ) ) )
                continue;
            return true;
        }
        return false;
    }

    // Raw line, no comment skipping (for the embedded circuit).
    std::string_view raw_line()
    {
        if ( _pos >= _text.size() )
            fail( "unexpected end of input" );
        const auto end = std::min( _text.find( '\n', _pos ), _text.size() );
        const auto line = _text.substr( _pos, end - _pos );
        _pos = end + 1;
        ++_line;
        return line;
    }

    [[noreturn]] void fail( const std::string& what ) const
    {
        throw invalid_pogp( "line " + std::to_string( _line ) + ": " + what );
    }

    std::size_t line() const { return _line; }

private:
    std::string_view _text;
    std::size_t _pos = 0;
    std::size_t _line = 0;
};

std::vector< std::string_view > split( std::string_view line )
{
    auto out = std::vector< std::string_view >{};
    std::size_t k = 0;
    while ( k < line.size() )
    {
        while ( k < line.size() && ( line[ k ] == ' ' || line[ k ] == '\t' ) )
            ++k;
        const auto start = k;
        while ( k < line.size() && line[ k ] != ' ' && line[ k ] != '\t' )
            ++k;
        if ( k > start )
            out.push_back( line.substr( start, k - start ) );
    }
    return out;
}

long long to_int( const Reader& r, std::string_view s )
{
    auto value = 0LL;
    const auto [ ptr, ec ] = std::from_chars( s.data(), s.data() + s.size(), value );
    if ( ec != std::errc{} || ptr != s.data() + s.size() )
        r.fail( "expected a number, got '" + std::string( s ) + "'" );
    return value;
}

// Zero-terminated integers after the key.
std::vector< int > zero_terminated( const Reader& r, const std::vector< std::string_view >& tok )
{
    if ( tok.size() < 2 || tok.back() != "0" )
        r.fail( "list must end with 0" );
    auto out = std::vector< int >{};
    for ( std::size_t k = 1; k + 1 < tok.size(); ++k )
    {
        const auto v = to_int( r, tok[ k ] );
        if ( v == 0 )
            r.fail( "0 inside a list" );
        out.push_back( static_cast< int >( v ) );
    }
    return out;
}

Cnf read_cnf( Reader& r, const std::vector< std::string_view >& tok )
{
    if ( tok.size() != 4 || tok[ 1 ] != "cnf" )
        r.fail( "expected '<section> cnf <vars> <clauses>'" );

    auto f = Cnf{ static_cast< Var >( to_int( r, tok[ 2 ] ) ) };
    const auto count = to_int( r, tok[ 3 ] );

    auto line = std::string_view{};
    for ( long long k = 0; k < count; ++k )
    {
        if ( !r.next_line( line ) )
            r.fail( "missing clauses" );
        const auto lits = split( line );
        if ( lits.empty() || lits.back() != "0" )
            r.fail( "clause must end with 0" );
        auto clause = std::vector< Lit >{};
        for ( std::size_t j = 0; j + 1 < lits.size(); ++j )
        {
            const auto v = to_int( r, lits[ j ] );
            if ( v == 0 || std::abs( v ) > f.num_vars() )
                r.fail( "literal out of range" );
            clause.push_back( Lit::from_dimacs( static_cast< int >( v ) ) );
        }
        if ( !f.add( std::move( clause ) ) )
            r.fail( "tautological clause" );
    }
    return f;
}

} // namespace

std::string serialize( const PogpInstance& p )
{
    const auto& ts = *p.ts;
    auto os = std::ostringstream{};

    os << "pogp 1\n";
    os << "origin " << origin_name( ts.origin ) << '\n';
    os << "base " << origin_name( ts.base_origin ) << '\n';
    os << "caps " << to_string( ts.caps.right_unique ) << ' ' << to_string( ts.caps.left_total ) << ' '
       << to_string( ts.caps.left_unique ) << ' ' << to_string( ts.caps.right_total ) << '\n';
    os << "level " << p.level << '\n';
    os << "vars " << ts.num_vars << '\n';
    write_list( os, "state", ts.state );
    write_list( os, "input", ts.input );
    write_list( os, "next", ts.next );
    write_cube( os, "m", p.m );
    write_cube( os, "i", p.i );
    write_cube( os, "tp", p.t_next );
    write_cube( os, "aux", p.aux );
    write_cube( os, "d", p.d );
    write_cube( os, "dp", p.d_next );
    write_cnf( os, "init", ts.init );
    write_cnf( os, "bad", ts.bad );
    write_cnf( os, "trans", ts.trans );
    if ( ts.constraint )
        write_cnf( os, "constraint", *ts.constraint );
    write_cnf( os, "frame", p.frame );

    if ( ts.circuit )
    {
        const auto text = unparse_aiger( ts.circuit->circuit );
        const auto lines = std::count( text.begin(), text.end(), '\n' );
        os << "circuit " << lines << '\n' << text;
    }

    os << "end\n";
    return os.str();
}

PogpInstance parse_pogp( std::string_view text )
{
    auto r = Reader{ text };
    auto line = std::string_view{};

    if ( !r.next_line( line ) || split( line ) != std::vector< std::string_view >{ "pogp", "1" } )
        r.fail( "expected header 'pogp 1'" );

    auto ts = TransitionSystem{};
    auto p = PogpInstance{};
    auto circuit = std::optional< Circuit >{};
    auto seen = std::vector< std::string >{};
    auto ended = false;

    while ( !ended && r.next_line( line ) )
    {
        const auto tok = split( line );
        const auto key = std::string( tok[ 0 ] );

        if ( key != "end" && std::find( seen.begin(), seen.end(), key ) != seen.end() )
            r.fail( "duplicate section '" + key + "'" );
        seen.push_back( key );

        const auto vars = [ & ]() {
            auto out = std::vector< Var >{};
            for ( const auto v : zero_terminated( r, tok ) )
            {
                if ( v < 0 )
                    r.fail( "negative variable" );
                out.push_back( v );
            }
            return out;
        };
        const auto cube = [ & ]() {
            auto lits = std::vector< Lit >{};
            for ( const auto v : zero_terminated( r, tok ) )
                lits.push_back( Lit::from_dimacs( v ) );
            try
            {
                return Cube{ std::move( lits ) };
            }
            catch ( const invalid_cube& e )
            {
                r.fail( e.what() );
            }
        };

        if ( key == "origin" || key == "base" )
        {
            const auto o = tok.size() == 2 ? parse_origin( tok[ 1 ] ) : std::nullopt;
            if ( !o )
                r.fail( "unknown origin" );
            ( key == "origin" ? ts.origin : ts.base_origin ) = *o;
        }
        else if ( key == "caps" )
        {
            if ( tok.size() != 5 )
                r.fail( "caps needs four values" );
            Tri* fields[] = { &ts.caps.right_unique, &ts.caps.left_total, &ts.caps.left_unique, &ts.caps.right_total };
            for ( std::size_t k = 0; k < 4; ++k )
            {
                const auto t = parse_tri( tok[ k + 1 ] );
                if ( !t )
                    r.fail( "caps values are true, false or unknown" );
                *fields[ k ] = *t;
            }
        }
        else if ( key == "level" && tok.size() == 2 )
            p.level = static_cast< int >( to_int( r, tok[ 1 ] ) );
        else if ( key == "vars" && tok.size() == 2 )
            ts.num_vars = static_cast< Var >( to_int( r, tok[ 1 ] ) );
        else if ( key == "state" )
            ts.state = vars();
        else if ( key == "input" )
            ts.input = vars();
        else if ( key == "next" )
            ts.next = vars();
        else if ( key == "m" )
            p.m = cube();
        else if ( key == "i" )
            p.i = cube();
        else if ( key == "tp" )
            p.t_next = cube();
        else if ( key == "aux" )
            p.aux = cube();
        else if ( key == "d" )
            p.d = cube();
        else if ( key == "dp" )
            p.d_next = cube();
        else if ( key == "init" )
            ts.init = read_cnf( r, tok );
        else if ( key == "bad" )
            ts.bad = read_cnf( r, tok );
        else if ( key == "trans" )
            ts.trans = read_cnf( r, tok );
        else if ( key == "constraint" )
            ts.constraint = read_cnf( r, tok );
        else if ( key == "frame" )
            p.frame = read_cnf( r, tok );
        else if ( key == "circuit" && tok.size() == 2 )
        {
            const auto count = to_int( r, tok[ 1 ] );
            auto aag = std::string{};
            for ( long long k = 0; k < count; ++k )
            {
                aag += r.raw_line();
                aag += '\n';
            }
            try
            {
                circuit = parse_aiger( aag );
            }
            catch ( const std::exception& e )
            {
                r.fail( std::string( "embedded circuit: " ) + e.what() );
            }
        }
        else if ( key == "end" )
            ended = true;
        else
            r.fail( "unknown section '" + key + "'" );
    }

    if ( !ended )
        r.fail( "missing 'end'" );

    for ( const auto* required : { "origin", "caps", "vars", "state", "input", "next", "m", "i", "tp", "dp", "trans" } )
        if ( std::find( seen.begin(), seen.end(), required ) == seen.end() )
            throw invalid_pogp( std::string( "missing section '" ) + required + "'" );

    if ( ts.state.size() != ts.next.size() )
        throw invalid_pogp( "state and next lists differ in length" );
    if ( std::find( seen.begin(), seen.end(), "base" ) == seen.end() )
        ts.base_origin = ts.origin;

    const auto declared = ts.num_vars;
    ts.index_vars();
    if ( ts.num_vars != declared )
        throw invalid_pogp( "a section uses variables beyond 'vars'" );

    if ( circuit )
    {
        auto rebuilt = circuit_to_ts( *circuit, ConstraintMode::keep_separate );
        if ( ts.origin == Origin::reversed )
            rebuilt = reverse( rebuilt );

        const auto same = rebuilt.state == ts.state && rebuilt.input == ts.input && rebuilt.next == ts.next &&
                          rebuilt.init == ts.init && rebuilt.bad == ts.bad && rebuilt.trans == ts.trans &&
                          rebuilt.constraint == ts.constraint && rebuilt.caps == ts.caps &&
                          rebuilt.origin == ts.origin && rebuilt.num_vars == ts.num_vars;
        if ( !same )
            throw invalid_pogp( "embedded circuit does not match the CNF sections" );
        ts = std::move( rebuilt );
    }

    p.ts = std::make_shared< const TransitionSystem >( std::move( ts ) );
    return p;
}

} // namespace pogen
