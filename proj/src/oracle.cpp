#include "pogen/oracle.hpp"

#include "pogen/encode.hpp"
#include "pogen/optsolvers.hpp"
#include "pogen/sat.hpp"

#include <algorithm>
#include <bit>

namespace pogen
{

PoCheck verify_po( const TransitionSystem& ts, const Cube& c, const Cube& d_next, const Cnf* frame )
{
    auto next_free = std::max( ts.num_vars, frame ? frame->num_vars() : Var{ 0 } ) + 1;
    const auto g = Lit::pos( next_free++ );

    auto problem = opt::Qbf2Problem{};
    auto& matrix = problem.matrix;

    for ( const auto v : ts.state )
        if ( !c.contains_var( v ) )
            problem.universal.push_back( v );
    for ( const auto l : c )
        matrix.add( { l } );

    // g → T ∧ d′
    const auto full = ts.full_trans();
    for ( const auto& clause : full.clauses() )
    {
        auto lits = std::vector< Lit >( clause.begin(), clause.end() );
        lits.push_back( ~g );
        matrix.add( Clause{ std::move( lits ) } );
    }
    for ( const auto l : d_next )
        matrix.add( { ~g, l } );

    // g ∨ ¬R
    auto escape = std::vector< Lit >{ g };
    if ( frame && frame->size() > 0 )
    {
        const auto neg = negate_cnf( *frame, next_free );
        matrix.append( neg.defs );
        escape.insert( escape.end(), neg.selectors.begin(), neg.selectors.end() );
        next_free = neg.next_free;
    }
    matrix.add( escape );
    matrix.set_num_vars( std::max( matrix.num_vars(), next_free - 1 ) );

    const auto r = opt::qbf2_solve( problem );
    if ( r.valid )
        return {};

    auto lits = std::vector< Lit >( c.begin(), c.end() );
    for ( const auto v : problem.universal )
    {
        const auto it = std::find_if( r.counterexample.begin(), r.counterexample.end(),
                                      [ & ]( Lit l ) { return l.var() == v; } );
        lits.push_back( it == r.counterexample.end() ? Lit::neg( v ) : *it );
    }
    return PoCheck{ false, Cube{ std::move( lits ) } };
}

namespace
{

struct StateTable
{
    std::vector< char > good; // has a successor in d′
    std::vector< char > in_frame;
};

bool frame_holds( const Cnf& frame, const TransitionSystem& ts, std::uint64_t bits )
{
    return std::all_of( frame.clauses().begin(), frame.clauses().end(), [ & ]( const Clause& c ) {
        return std::any_of( c.begin(), c.end(), [ & ]( Lit l ) {
            const auto k = ts.state_pos( l.var() );
            return k >= 0 && ( ( bits >> k ) & 1u ) != l.negated();
        } );
    } );
}

StateTable tabulate( const PogpInstance& p )
{
    const auto& ts = *p.ts;
    const auto n = ts.state.size();

    auto solver = sat::Solver{ std::max( ts.num_vars, p.frame.num_vars() ) };
    solver.add_cnf( ts.full_trans() );
    for ( const auto l : p.d_next )
        solver.add_clause( { l } );

    auto table = StateTable{};
    for ( std::uint64_t bits = 0; bits < ( std::uint64_t{ 1 } << n ); ++bits )
    {
        auto assumptions = std::vector< Lit >{};
        for ( std::size_t k = 0; k < n; ++k )
            assumptions.emplace_back( ts.state[ k ], ( ( bits >> k ) & 1u ) == 0 );
        table.good.push_back( solver.solve( assumptions ) == sat::Status::sat );
        table.in_frame.push_back( frame_holds( p.frame, ts, bits ) );
    }
    return table;
}

// cube given as (care mask, value bits) over state positions
bool qualifies( const StateTable& t, std::size_t n, std::uint64_t care, std::uint64_t value, bool need_frame )
{
    auto meets_frame = false;
    const auto free_mask = ~care & ( ( std::uint64_t{ 1 } << n ) - 1 );
    // iterate the subsets of free_mask
    for ( std::uint64_t sub = free_mask;; sub = ( sub - 1 ) & free_mask )
    {
        const auto s = value | sub;
        if ( !need_frame || t.in_frame[ s ] )
        {
            if ( !t.good[ s ] )
                return false;
            meets_frame = true;
        }
        if ( sub == 0 )
            break;
    }
    return !need_frame || meets_frame;
}

Cube cube_of( const TransitionSystem& ts, std::uint64_t care, std::uint64_t value )
{
    auto lits = std::vector< Lit >{};
    for ( std::size_t k = 0; k < ts.state.size(); ++k )
        if ( ( care >> k ) & 1u )
            lits.emplace_back( ts.state[ k ], ( ( value >> k ) & 1u ) == 0 );
    return Cube{ std::move( lits ) };
}

} // namespace

OracleResult brute_force_oracle( const PogpInstance& p, Mode mode, std::size_t max_state_vars )
{
    const auto& ts = *p.ts;
    const auto n = ts.state.size();
    if ( n > max_state_vars || n > 20 )
        throw oracle_too_large( "enumeration oracle limited to " + std::to_string( max_state_vars ) + " state variables" );

    const auto table = tabulate( p );
    const auto all = ( std::uint64_t{ 1 } << n ) - 1;

    auto m_bits = std::uint64_t{ 0 };
    for ( std::size_t k = 0; k < n; ++k )
        if ( p.m.contains( Lit::pos( ts.state[ k ] ) ) )
            m_bits |= std::uint64_t{ 1 } << k;

    auto best = OracleResult{ p.m, 0 };
    auto best_free = -1;

    const auto consider = [ & ]( std::uint64_t care, std::uint64_t value ) {
        const auto removed = static_cast< int >( n ) - std::popcount( care );
        if ( removed <= best_free )
            return;
        if ( !qualifies( table, n, care, value, mode == Mode::free ) )
            return;
        best_free = removed;
        best = { cube_of( ts, care, value ), static_cast< std::size_t >( removed ) };
    };

    if ( mode == Mode::fix )
    {
        for ( std::uint64_t care = 0; care <= all; ++care )
            consider( care, m_bits & care );
    }
    else
    {
        for ( std::uint64_t care = 0; care <= all; ++care )
            for ( std::uint64_t value = care;; value = ( value - 1 ) & care )
            {
                consider( care, value );
                if ( value == 0 )
                    break;
            }
    }

    if ( best_free < 0 )
        throw std::logic_error( "no valid generalization, m is not a proof obligation" );
    return best;
}

} // namespace pogen
