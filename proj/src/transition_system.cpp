#include "pogen/transition_system.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>

namespace pogen
{

std::string_view to_string( Tri t )
{
    switch ( t )
    {
    case Tri::no: return "false";
    case Tri::yes: return "true";
    case Tri::unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string( Origin o )
{
    switch ( o )
    {
    case Origin::circuit: return "circuit";
    case Origin::circuit_constraint: return "circuit+constraint";
    case Origin::dimspec: return "dimspec";
    case Origin::reversed: return "reversed";
    }
    return "unknown";
}

std::string_view to_string( ConstraintMode m )
{
    switch ( m )
    {
    case ConstraintMode::reject: return "reject";
    case ConstraintMode::self_loops: return "self-loops";
    case ConstraintMode::dead_end: return "dead-end";
    case ConstraintMode::keep_separate: return "keep-separate";
    }
    return "unknown";
}

std::optional< ConstraintMode > parse_constraint_mode( std::string_view name )
{
    for ( const auto m : { ConstraintMode::reject, ConstraintMode::self_loops,
                           ConstraintMode::dead_end, ConstraintMode::keep_separate } )
    {
        auto alt = std::string( to_string( m ) );
        std::replace( alt.begin(), alt.end(), '-', '_' );
        if ( name == to_string( m ) || name == alt )
            return m;
    }

    return std::nullopt;
}

void TransitionSystem::index_vars()
{
    auto max_var = Var{ 0 };

    for ( const auto* list : { &state, &input, &next } )
        for ( const auto v : *list )
            max_var = std::max( max_var, v );

    for ( const auto* f : { &init, &bad, &trans } )
        max_var = std::max( max_var, f->num_vars() );

    if ( constraint )
        max_var = std::max( max_var, constraint->num_vars() );

    num_vars = std::max( num_vars, max_var );

    const auto fill = [ & ]( std::vector< int >& table, const std::vector< Var >& vars ) {
        table.assign( static_cast< std::size_t >( num_vars ) + 1, -1 );
        for ( std::size_t k = 0; k < vars.size(); ++k )
            table[ vars[ k ] ] = static_cast< int >( k );
    };

    fill( _state_pos, state );
    fill( _next_pos, next );
    fill( _input_pos, input );
}

std::optional< Cube > TransitionSystem::init_cube() const
{
    auto lits = std::vector< Lit >{};

    for ( const auto& c : init.clauses() )
    {
        if ( c.size() != 1 || state_pos( c[ 0 ].var() ) < 0 )
            return std::nullopt;
        lits.push_back( c[ 0 ] );
    }

    try
    {
        return Cube{ std::move( lits ) };
    }
    catch ( const invalid_cube& )
    {
        return std::nullopt;
    }
}

Cnf TransitionSystem::full_trans() const
{
    auto t = trans;

    if ( constraint )
        t.append( *constraint );

    return t;
}

Cube TransitionSystem::primed( const Cube& c ) const
{
    auto lits = std::vector< Lit >{};
    for ( const auto l : c )
        lits.push_back( primed( l ) );
    return Cube{ std::move( lits ) };
}

Cube TransitionSystem::unprimed( const Cube& c ) const
{
    auto lits = std::vector< Lit >{};
    for ( const auto l : c )
        lits.push_back( unprimed( l ) );
    return Cube{ std::move( lits ) };
}

namespace
{

AigLit conjunction( Circuit& c, const std::vector< AigLit >& lits )
{
    auto acc = AigLit::constant( true );

    for ( const auto l : lits )
        acc = acc == AigLit::constant( true ) ? l : c.add_and( acc, l );

    return acc;
}

AigLit disjunction( Circuit& c, const std::vector< AigLit >& lits )
{
    auto acc = AigLit::constant( false );

    for ( const auto l : lits )
        acc = acc == AigLit::constant( false ) ? l : c.add_or( acc, l );

    return acc;
}

// Tseitin copy of the cone of `root`, sharing only the latch variables.
// Returns the literal of root in the copy.
Lit encode_cone( const Circuit& c, AigLit root, const TseitinEncoding& shared, Cnf& out, Var& next_free )
{
    const auto gate_of = c.gate_index();
    auto copy = std::vector< Var >( c.max_var + 1, 0 );

    for ( const auto& l : c.latches )
        copy[ l.var ] = shared.node_var[ l.var ];

    auto const_var = Var{ 0 };

    const auto lit_of = [ & ]( AigLit l ) -> Lit {
        if ( l.is_constant() )
        {
            if ( const_var == 0 )
            {
                const_var = next_free++;
                out.add( { Lit::neg( const_var ) } );
            }
            return Lit{ const_var, l.negated() };
        }
        return Lit{ copy[ l.var() ], l.negated() };
    };

    // iterative post-order over the cone
    auto stack = std::vector< std::pair< std::uint32_t, bool > >{ { root.var(), false } };

    while ( !stack.empty() )
    {
        const auto [ v, expanded ] = stack.back();
        stack.pop_back();

        if ( v == 0 || copy[ v ] != 0 )
            continue;

        const auto g = gate_of[ v ];

        if ( g < 0 ) // input
        {
            copy[ v ] = next_free++;
            continue;
        }

        const auto& gate = c.gates[ g ];

        if ( !expanded )
        {
            stack.emplace_back( v, true );
            stack.emplace_back( gate.in0.var(), false );
            stack.emplace_back( gate.in1.var(), false );
            continue;
        }

        copy[ v ] = next_free++;
        const auto h = Lit::pos( copy[ v ] );
        const auto a = lit_of( gate.in0 );
        const auto b = lit_of( gate.in1 );
        out.add( { ~h, a } );
        out.add( { ~h, b } );
        out.add( { h, ~a, ~b } );
    }

    return lit_of( root );
}

TransitionSystem build( const Circuit& c, bool keep_constraint )
{
    auto ts = TransitionSystem{};
    auto link = std::make_shared< CircuitLink >();
    link->circuit = c;
    link->encoding = tseitin( c );

    const auto& enc = link->encoding;
    ts.state = enc.state;
    ts.input = enc.input;
    ts.next = enc.next;
    ts.trans = enc.cnf;

    auto next_free = std::max( enc.cnf.num_vars(), static_cast< Var >( 2 * c.latches.size() + c.inputs.size() ) ) + 1;

    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        ts.init.add( { Lit{ enc.state[ k ], !c.latches[ k ].init } } );

    if ( keep_constraint && !c.constraints.empty() )
    {
        auto cons = Cnf{};
        for ( const auto l : c.constraints )
            cons.add( { enc.lit( l ) } );
        ts.constraint = std::move( cons );
    }

    // effective bad = (OR of bad literals) ∧ constraints, on a scratch copy
    auto scratch = c;
    auto root = disjunction( scratch, c.bad_literals() );
    if ( !c.constraints.empty() )
    {
        auto parts = c.constraints;
        parts.insert( parts.begin(), root );
        root = conjunction( scratch, parts );
    }

    const auto bad_lit = encode_cone( scratch, root, enc, ts.bad, next_free );
    ts.bad.add( { bad_lit } );

    ts.num_vars = next_free - 1;

    if ( ts.constraint )
    {
        ts.caps = { Tri::yes, Tri::no, Tri::unknown, Tri::unknown };
        ts.origin = ts.base_origin = Origin::circuit_constraint;
    }
    else
    {
        ts.caps = { Tri::yes, Tri::yes, Tri::unknown, Tri::unknown };
        ts.origin = ts.base_origin = Origin::circuit;
    }

    ts.circuit = std::move( link );
    ts.index_vars();
    return ts;
}

} // namespace

Circuit repair_self_loops( const Circuit& input )
{
    auto c = input;
    c.constraints.clear();
    c.bad.clear();

    const auto ok = conjunction( c, input.constraints );

    for ( auto& latch : c.latches )
    {
        const auto s = AigLit::make( latch.var, false );
        const auto keep = c.add_and( !ok, s );
        const auto step = c.add_and( ok, latch.next );
        latch.next = c.add_or( step, keep );
    }

    const auto bad = disjunction( c, input.bad_literals() );
    c.bad.push_back( c.add_and( bad, ok ) );
    return c;
}

Circuit repair_dead_end( const Circuit& input )
{
    auto c = input;
    c.constraints.clear();
    c.bad.clear();

    const auto dead = ++c.max_var;
    const auto dead_lit = AigLit::make( dead, false );
    const auto ok = conjunction( c, input.constraints );
    const auto enter = c.add_or( !ok, dead_lit );

    for ( auto& latch : c.latches )
        latch.next = c.add_and( latch.next, !enter );

    c.latches.push_back( { dead, enter, false } );

    const auto bad = disjunction( c, input.bad_literals() );
    c.bad.push_back( c.add_and( c.add_and( bad, ok ), !dead_lit ) );
    return c;
}

TransitionSystem circuit_to_ts( const Circuit& c, ConstraintMode mode )
{
    if ( c.constraints.empty() )
        return build( c, false );

    switch ( mode )
    {
    case ConstraintMode::reject:
        throw constrained_system_error( "circuit has " + std::to_string( c.constraints.size() ) +
                                        " invariant constraint(s); choose a constraint mode" );
    case ConstraintMode::self_loops:
        return build( repair_self_loops( c ), false );
    case ConstraintMode::dead_end:
        return build( repair_dead_end( c ), false );
    case ConstraintMode::keep_separate:
        return build( c, true );
    }

    throw std::logic_error( "unknown constraint mode" );
}

namespace
{

std::vector< long long > numbers( std::string_view line, std::size_t lineno )
{
    auto out = std::vector< long long >{};
    std::size_t i = 0;

    while ( i < line.size() )
    {
        while ( i < line.size() && ( line[ i ] == ' ' || line[ i ] == '\t' ) )
            ++i;
        if ( i >= line.size() )
            break;

        long long value = 0;
        const auto* first = line.data() + i;
        const auto [ ptr, ec ] = std::from_chars( first, line.data() + line.size(), value );
        if ( ec != std::errc{} )
            throw parse_error( lineno, "expected integer in '" + std::string( line ) + "'" );
        out.push_back( value );
        i += static_cast< std::size_t >( ptr - first );
    }

    return out;
}

} // namespace

TransitionSystem parse_dimspec( std::string_view text )
{
    // sections: i, u, g, t
    auto sections = std::array< std::optional< Cnf >, 4 >{};
    auto declared = std::array< long long, 4 >{};
    auto expected = std::array< long long, 4 >{};
    const auto section_index = []( char c ) -> int {
        switch ( c )
        {
        case 'i': return 0;
        case 'u': return 1;
        case 'g': return 2;
        case 't': return 3;
        default: return -1;
        }
    };

    long long n = -1;
    int current = -1;
    auto pending = std::vector< Lit >{};
    std::size_t lineno = 0;
    std::size_t pos = 0;

    while ( pos < text.size() )
    {
        const auto end = text.find( '\n', pos );
        auto line = text.substr( pos, end == std::string_view::npos ? std::string_view::npos : end - pos );
        pos = end == std::string_view::npos ? text.size() : end + 1;
        ++lineno;

        if ( !line.empty() && line.back() == '\r' )
            line.remove_suffix( 1 );

        const auto first = line.find_first_not_of( " \t" );
        if ( first == std::string_view::npos )
            continue;
        line = line.substr( first );

        if ( line[ 0 ] == 'c' && ( line.size() == 1 || line[ 1 ] == ' ' ) )
            continue;

        if ( line.size() > 1 && section_index( line[ 0 ] ) >= 0 && line[ 1 ] == ' ' )
        {
            if ( !pending.empty() )
                throw parse_error( lineno, "clause not terminated by 0 before new section" );

            const auto idx = section_index( line[ 0 ] );
            auto rest = line.substr( 2 );
            const auto p = rest.find_first_not_of( ' ' );
            rest = p == std::string_view::npos ? std::string_view{} : rest.substr( p );
            if ( !rest.starts_with( "cnf" ) )
                throw parse_error( lineno, "expected '<section> cnf <vars> <clauses>'" );

            const auto nums = numbers( rest.substr( 3 ), lineno );
            if ( nums.size() != 2 || nums[ 0 ] < 0 || nums[ 1 ] < 0 )
                throw parse_error( lineno, "expected '<section> cnf <vars> <clauses>'" );
            if ( sections[ idx ] )
                throw parse_error( lineno, std::string( "duplicate section '" ) + line[ 0 ] + "'" );

            const auto vars = idx == 3 ? nums[ 0 ] / 2 : nums[ 0 ];
            if ( idx == 3 && nums[ 0 ] % 2 != 0 )
                throw parse_error( lineno, "transition section must declare 2n variables" );
            if ( n >= 0 && vars != n )
                throw parse_error( lineno, "inconsistent variable count across sections" );

            n = vars;
            current = idx;
            sections[ idx ] = Cnf{};
            declared[ idx ] = nums[ 1 ];
            expected[ idx ] = idx == 3 ? 2 * n : n;
            continue;
        }

        if ( current < 0 )
            throw parse_error( lineno, "clause outside of a section" );

        for ( const auto value : numbers( line, lineno ) )
        {
            if ( value == 0 )
            {
                sections[ current ]->add( pending );
                pending.clear();
                continue;
            }

            if ( value > expected[ current ] || -value > expected[ current ] )
                throw parse_error( lineno, "variable " + std::to_string( value < 0 ? -value : value ) +
                                           " out of range" );

            pending.push_back( Lit::from_dimacs( static_cast< int >( value ) ) );
        }
    }

    if ( !pending.empty() )
        throw parse_error( lineno, "last clause not terminated by 0" );

    for ( const char name : { 'i', 'u', 'g', 't' } )
        if ( !sections[ section_index( name ) ] )
            throw parse_error( lineno, std::string( "missing section '" ) + name + "'" );

    auto ts = TransitionSystem{};
    const auto vars = static_cast< Var >( n );

    for ( Var v = 1; v <= vars; ++v )
    {
        ts.state.push_back( v );
        ts.next.push_back( v + vars );
    }

    const auto& u = *sections[ 1 ];
    auto shift = std::vector< Var >( static_cast< std::size_t >( vars ) + 1, 0 );
    for ( Var v = 1; v <= vars; ++v )
        shift[ v ] = v + vars;

    ts.init = *sections[ 0 ];
    ts.init.append( u );
    ts.bad = *sections[ 2 ];
    ts.trans = *sections[ 3 ];
    ts.trans.append( u );
    ts.trans.append( u.rename( shift ) );

    ts.init.set_num_vars( vars );
    ts.bad.set_num_vars( vars );
    ts.trans.set_num_vars( 2 * vars );

    ts.caps = {};
    ts.origin = ts.base_origin = Origin::dimspec;
    ts.num_vars = 2 * vars;
    ts.index_vars();
    return ts;
}

TransitionSystem reverse( const TransitionSystem& ts )
{
    if ( ts.has_constraint() )
        throw constrained_system_error( "reverse requires a constraint-free system; repair constraints first" );

    auto r = ts;
    std::swap( r.init, r.bad );

    auto swap_map = std::vector< Var >( static_cast< std::size_t >( ts.num_vars ) + 1, 0 );
    for ( std::size_t k = 0; k < ts.state.size(); ++k )
    {
        swap_map[ ts.state[ k ] ] = ts.next[ k ];
        swap_map[ ts.next[ k ] ] = ts.state[ k ];
    }

    r.trans = ts.trans.rename( swap_map );
    r.caps = { ts.caps.left_unique, ts.caps.right_total, ts.caps.right_unique, ts.caps.left_total };
    r.origin = ts.reversed() ? ts.base_origin : Origin::reversed;
    r.base_origin = ts.base_origin;
    r.index_vars();
    return r;
}

} // namespace pogen
