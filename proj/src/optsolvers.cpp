#include "pogen/optsolvers.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace pogen::opt
{

namespace
{

// Merges two unary counters into one of width |a| + |b|.
std::vector< Lit > merge( const std::vector< Lit >& a, const std::vector< Lit >& b, Cnf& out, Var& next_free )
{
    const auto p = a.size();
    const auto q = b.size();
    auto r = std::vector< Lit >{};
    for ( std::size_t k = 0; k < p + q; ++k )
        r.push_back( Lit::pos( next_free++ ) );

    // a_i ∧ b_j → r_{i+j}, with a_0 = b_0 = true
    for ( std::size_t i = 0; i <= p; ++i )
    {
        for ( std::size_t j = 0; j <= q; ++j )
        {
            if ( i + j == 0 )
                continue;
            auto c = std::vector< Lit >{};
            if ( i > 0 )
                c.push_back( ~a[ i - 1 ] );
            if ( j > 0 )
                c.push_back( ~b[ j - 1 ] );
            c.push_back( r[ i + j - 1 ] );
            out.add( std::move( c ) );
        }
    }

    // ¬a_{i+1} ∧ ¬b_{j+1} → ¬r_{i+j+1}, with a_{p+1} = b_{q+1} = false
    for ( std::size_t i = 0; i <= p; ++i )
    {
        for ( std::size_t j = 0; j <= q; ++j )
        {
            if ( i + j >= p + q )
                continue;
            auto c = std::vector< Lit >{};
            if ( i < p )
                c.push_back( a[ i ] );
            if ( j < q )
                c.push_back( b[ j ] );
            c.push_back( ~r[ i + j ] );
            out.add( std::move( c ) );
        }
    }

    return r;
}

std::vector< Lit > build( std::span< const Lit > inputs, Cnf& out, Var& next_free )
{
    if ( inputs.size() <= 1 )
        return { inputs.begin(), inputs.end() };

    const auto half = inputs.size() / 2;
    const auto a = build( inputs.first( half ), out, next_free );
    const auto b = build( inputs.subspan( half ), out, next_free );
    return merge( a, b, out, next_free );
}

std::size_t count_true( const Assignment& model, std::span< const Lit > lits )
{
    return static_cast< std::size_t >(
        std::count_if( lits.begin(), lits.end(), [ & ]( Lit l ) { return model[ l.var() ] != l.negated(); } ) );
}

Var max_var_of( std::span< const Lit > lits )
{
    auto v = Var{ 0 };
    for ( const auto l : lits )
        v = std::max( v, l.var() );
    return v;
}

} // namespace

Totalizer build_totalizer( std::span< const Lit > inputs, Var& next_free )
{
    auto t = Totalizer{};
    t.outputs = build( inputs, t.clauses, next_free );
    t.clauses.set_num_vars( std::max( t.clauses.num_vars(), next_free - 1 ) );
    return t;
}

MaxSatResult max_sat( const MaxSatProblem& p, const MaxSatOptions& options )
{
    auto solver = sat::Solver{};
    solver.set_polarity( options.polarity );
    solver.set_priority( options.priority );
    solver.reserve_vars( std::max( p.hard.num_vars(), max_var_of( p.soft ) ) );
    solver.add_cnf( p.hard );

    if ( solver.solve() != sat::Status::sat )
        throw no_solution( "hard clauses are unsatisfiable" );

    auto result = MaxSatResult{};
    result.model = solver.model();
    result.satisfied = count_true( result.model, p.soft );

    if ( result.satisfied < p.soft.size() )
    {
        auto next_free = solver.num_vars() + 1;
        const auto tot = build_totalizer( p.soft, next_free );
        solver.reserve_vars( next_free - 1 );
        solver.add_cnf( tot.clauses );

        while ( result.satisfied < p.soft.size() )
        {
            const auto at_least = tot.outputs[ result.satisfied ];
            if ( solver.solve( { at_least } ) != sat::Status::sat )
                break;
            result.model = solver.model();
            result.satisfied = count_true( result.model, p.soft );
        }
    }

    result.model.resize( static_cast< std::size_t >( p.hard.num_vars() ) + 1 );
    result.model.resize( std::max< std::size_t >( result.model.size(), max_var_of( p.soft ) + 1 ) );
    result.stats = solver.stats();
    return result;
}

namespace
{

class CoverSearch
{
public:
    CoverSearch( std::vector< std::vector< int > > rows, std::size_t columns )
        : _rows{ std::move( rows ) }, _columns{ columns }, _covered( _rows.size(), 0 ), _col_rows( columns )
    {
        for ( std::size_t r = 0; r < _rows.size(); ++r )
            for ( const auto c : _rows[ r ] )
                _col_rows[ c ].push_back( static_cast< int >( r ) );
    }

    std::vector< int > run()
    {
        _best = greedy();
        auto chosen = std::vector< int >{};
        search( chosen );
        std::sort( _best.begin(), _best.end() );
        return _best;
    }

private:
    std::vector< int > greedy() const
    {
        auto covered = std::vector< char >( _rows.size(), 0 );
        auto out = std::vector< int >{};
        auto left = _rows.size();

        while ( left > 0 )
        {
            auto best = -1;
            auto best_gain = std::size_t{ 0 };
            for ( std::size_t c = 0; c < _columns; ++c )
            {
                const auto gain = static_cast< std::size_t >( std::count_if(
                    _col_rows[ c ].begin(), _col_rows[ c ].end(), [ & ]( int r ) { return !covered[ r ]; } ) );
                if ( gain > best_gain )
                {
                    best_gain = gain;
                    best = static_cast< int >( c );
                }
            }
            out.push_back( best );
            for ( const auto r : _col_rows[ best ] )
            {
                if ( !covered[ r ] )
                {
                    covered[ r ] = 1;
                    --left;
                }
            }
        }

        return out;
    }

    // Rows pairwise sharing no column each need their own column.
    std::size_t lower_bound() const
    {
        auto used = std::vector< char >( _columns, 0 );
        auto bound = std::size_t{ 0 };

        for ( std::size_t r = 0; r < _rows.size(); ++r )
        {
            if ( _covered[ r ] )
                continue;
            const auto& row = _rows[ r ];
            if ( std::none_of( row.begin(), row.end(), [ & ]( int c ) { return used[ c ]; } ) )
            {
                ++bound;
                for ( const auto c : row )
                    used[ c ] = 1;
            }
        }

        return bound;
    }

    void search( std::vector< int >& chosen )
    {
        if ( chosen.size() + lower_bound() >= _best.size() )
            return;

        // branch on the uncovered row with fewest columns
        auto pick = -1;
        for ( std::size_t r = 0; r < _rows.size(); ++r )
        {
            if ( _covered[ r ] )
                continue;
            if ( pick < 0 || _rows[ r ].size() < _rows[ pick ].size() )
                pick = static_cast< int >( r );
        }

        if ( pick < 0 )
        {
            _best = chosen;
            return;
        }

        for ( const auto c : _rows[ pick ] )
        {
            chosen.push_back( c );
            for ( const auto r : _col_rows[ c ] )
                ++_covered[ r ];

            search( chosen );

            for ( const auto r : _col_rows[ c ] )
                --_covered[ r ];
            chosen.pop_back();
        }
    }

    std::vector< std::vector< int > > _rows;
    std::size_t _columns;
    std::vector< int > _covered;
    std::vector< std::vector< int > > _col_rows;
    std::vector< int > _best;
};

} // namespace

std::vector< Lit > min_cover( std::span< const Clause > universe, std::span< const Lit > candidates )
{
    auto rows = std::vector< std::vector< int > >{};

    for ( const auto& clause : universe )
    {
        auto row = std::vector< int >{};
        for ( std::size_t k = 0; k < candidates.size(); ++k )
            if ( clause.contains( candidates[ k ] ) )
                row.push_back( static_cast< int >( k ) );

        if ( row.empty() )
            throw no_solution( "clause " + to_string( clause ) + " cannot be covered" );
        rows.push_back( std::move( row ) );
    }

    // drop duplicates and rows implied by a smaller row
    std::sort( rows.begin(), rows.end(), []( const auto& a, const auto& b ) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    } );
    rows.erase( std::unique( rows.begin(), rows.end() ), rows.end() );

    auto kept = std::vector< std::vector< int > >{};
    for ( auto& row : rows )
    {
        const auto implied = std::any_of( kept.begin(), kept.end(), [ & ]( const auto& smaller ) {
            return std::includes( row.begin(), row.end(), smaller.begin(), smaller.end() );
        } );
        if ( !implied )
            kept.push_back( std::move( row ) );
    }

    auto out = std::vector< Lit >{};
    for ( const auto c : CoverSearch( std::move( kept ), candidates.size() ).run() )
        out.push_back( candidates[ c ] );
    return out;
}

namespace
{

enum class Block : std::uint8_t
{
    inner,
    outer,
    universal
};

} // namespace

struct Qbf2Solver::Impl
{
    Qbf2Problem problem;
    std::vector< Block > block;
    Var num_vars = 0;

    sat::Solver abstraction; // over outer variables plus refinement copies
    sat::Solver verifier;    // the matrix itself
    sat::Stats candidate_stats;

    explicit Impl( Qbf2Problem p ) : problem{ std::move( p ) }
    {
        num_vars = std::max( problem.matrix.num_vars(), problem.outer_constraints.num_vars() );
        for ( const auto* list : { &problem.outer, &problem.universal } )
            for ( const auto v : *list )
                num_vars = std::max( num_vars, v );

        block.assign( static_cast< std::size_t >( num_vars ) + 1, Block::inner );
        for ( const auto v : problem.outer )
            block[ v ] = Block::outer;
        for ( const auto v : problem.universal )
            block[ v ] = Block::universal;

        abstraction.reserve_vars( num_vars );
        abstraction.add_cnf( problem.outer_constraints );
        verifier.reserve_vars( num_vars );
        verifier.add_cnf( problem.matrix );
    }

    // Adds the matrix with the universal block fixed to `y` and fresh copies
    // of the inner variables.
    void refine( const std::vector< Lit >& y )
    {
        auto fixed = std::vector< std::int8_t >( static_cast< std::size_t >( num_vars ) + 1, 0 );
        for ( const auto l : y )
            fixed[ l.var() ] = l.negated() ? -1 : 1;

        auto copy = std::vector< Var >( static_cast< std::size_t >( num_vars ) + 1, 0 );

        for ( const auto& clause : problem.matrix.clauses() )
        {
            auto lits = std::vector< Lit >{};
            auto satisfied = false;

            for ( const auto l : clause )
            {
                const auto v = l.var();
                if ( block[ v ] == Block::universal )
                {
                    if ( ( fixed[ v ] > 0 ) != l.negated() )
                    {
                        satisfied = true;
                        break;
                    }
                    continue;
                }
                if ( block[ v ] == Block::inner )
                {
                    if ( copy[ v ] == 0 )
                        copy[ v ] = abstraction.new_var();
                    lits.emplace_back( copy[ v ], l.negated() );
                }
                else
                {
                    lits.push_back( l );
                }
            }

            if ( !satisfied )
                abstraction.add_clause( lits );
        }
    }

    std::vector< Lit > outer_candidate() const
    {
        auto x = std::vector< Lit >{};
        for ( const auto v : problem.outer )
            x.emplace_back( v, !abstraction.model_value( v ) );
        return x;
    }

    Qbf2Result solve( std::span< const Lit > assumptions )
    {
        auto result = Qbf2Result{};

        while ( true )
        {
            ++result.iterations;
            if ( abstraction.solve( assumptions ) != sat::Status::sat )
                return result;

            const auto x = outer_candidate();
            const auto y = find_counterexample( x );

            if ( !y )
            {
                result.valid = true;
                result.witness.assign( static_cast< std::size_t >( num_vars ) + 1, false );
                for ( const auto l : x )
                    result.witness[ l.var() ] = !l.negated();
                return result;
            }

            result.counterexample = *y;
            refine( *y );
        }
    }

    // A universal assignment under which the matrix fails for x, if any.
    std::optional< std::vector< Lit > > find_counterexample( const std::vector< Lit >& x )
    {
        auto candidates = sat::Solver{ num_vars };
        auto assumptions = std::vector< Lit >{};

        while ( true )
        {
            const auto status = candidates.solve();
            if ( status != sat::Status::sat )
            {
                candidate_stats += candidates.stats();
                return std::nullopt;
            }

            auto y = std::vector< Lit >{};
            for ( const auto v : problem.universal )
                y.emplace_back( v, !candidates.model_value( v ) );

            assumptions = x;
            assumptions.insert( assumptions.end(), y.begin(), y.end() );
            if ( verifier.solve( assumptions ) != sat::Status::sat )
            {
                candidate_stats += candidates.stats();
                return y;
            }

            // Every further candidate must falsify some universal residual
            // of a clause not already satisfied by x and the inner model.
            auto selectors = std::vector< Lit >{};
            for ( const auto& clause : problem.matrix.clauses() )
            {
                auto residual = std::vector< Lit >{};
                auto satisfied = false;
                for ( const auto l : clause )
                {
                    if ( block[ l.var() ] == Block::universal )
                        residual.push_back( l );
                    else if ( verifier.model_value( l ) )
                        satisfied = true;
                }
                if ( satisfied )
                    continue;

                const auto sel = Lit::pos( candidates.new_var() );
                for ( const auto l : residual )
                    candidates.add_clause( { ~sel, ~l } );
                selectors.push_back( sel );
            }
            candidates.add_clause( selectors );
        }
    }
};

Qbf2Solver::Qbf2Solver( Qbf2Problem p ) : _impl{ std::make_unique< Impl >( std::move( p ) ) } {}
Qbf2Solver::~Qbf2Solver() = default;
Qbf2Solver::Qbf2Solver( Qbf2Solver&& ) noexcept = default;
Qbf2Solver& Qbf2Solver::operator=( Qbf2Solver&& ) noexcept = default;

Qbf2Result Qbf2Solver::solve( std::span< const Lit > outer_assumptions )
{
    return _impl->solve( outer_assumptions );
}

const sat::Stats& Qbf2Solver::stats() const
{
    return _impl->candidate_stats;
}

Qbf2Result qbf2_solve( const Qbf2Problem& p )
{
    return Qbf2Solver{ p }.solve();
}

MaxQbfResult max_qbf( const MaxQbfProblem& p, bool ascending )
{
    auto problem = p.qbf;
    auto next_free = std::max( problem.matrix.num_vars(), problem.outer_constraints.num_vars() );
    for ( const auto* list : { &problem.outer, &problem.universal } )
        for ( const auto v : *list )
            next_free = std::max( next_free, v );
    next_free = std::max( next_free, max_var_of( p.soft ) ) + 1;

    const auto first_counter = next_free;
    const auto tot = build_totalizer( p.soft, next_free );
    problem.outer_constraints.append( tot.clauses );
    for ( auto v = first_counter; v < next_free; ++v )
        problem.outer.push_back( v );

    auto solver = Qbf2Solver{ std::move( problem ) };
    auto result = MaxQbfResult{};

    const auto query = [ & ]( std::size_t k ) {
        ++result.qbf_calls;
        if ( k == 0 )
        {
            auto none = std::vector< Lit >{};
            for ( const auto l : p.soft )
                none.push_back( ~l );
            return solver.solve( none );
        }
        const auto at_least = tot.outputs[ k - 1 ];
        return solver.solve( std::span( &at_least, 1 ) );
    };

    const auto accept = [ & ]( const Qbf2Result& r ) {
        result.witness = r.witness;
        result.witness.resize( static_cast< std::size_t >( first_counter ) );
        result.satisfied = count_true( r.witness, p.soft );
    };

    const auto base = query( 0 );
    if ( !base.valid )
        throw invalid_base( "instance is invalid with every soft literal false" );
    accept( base );

    if ( ascending )
    {
        for ( auto k = result.satisfied + 1; k <= p.soft.size(); k = result.satisfied + 1 )
        {
            const auto r = query( k );
            if ( !r.valid )
                break;
            accept( r );
        }
    }
    else
    {
        for ( auto k = p.soft.size(); k > result.satisfied; --k )
        {
            const auto r = query( k );
            if ( r.valid )
            {
                accept( r );
                break;
            }
        }
    }

    return result;
}

} // namespace pogen::opt
