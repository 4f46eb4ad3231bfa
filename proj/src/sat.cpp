#include "pogen/sat.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pogen::sat
{

namespace
{

constexpr double var_decay = 0.95;
constexpr double clause_decay = 0.999;
constexpr int restart_base = 100;

double luby( double y, int x )
{
    int size = 1;
    int seq = 0;

    while ( size < x + 1 )
    {
        ++seq;
        size = 2 * size + 1;
    }

    while ( size - 1 != x )
    {
        size = ( size - 1 ) >> 1;
        --seq;
        x = x % size;
    }

    return std::pow( y, seq );
}

} // namespace

Stats& Stats::operator+=( const Stats& o )
{
    solves += o.solves;
    decisions += o.decisions;
    propagations += o.propagations;
    conflicts += o.conflicts;
    restarts += o.restarts;
    learnts += o.learnts;
    return *this;
}

Solver::Solver()
{
    // index 0 is a placeholder so that variables index directly
    _assigns.push_back( 0 );
    _level.push_back( -1 );
    _reason.push_back( -1 );
    _phase.push_back( false );
    _activity.push_back( 0.0 );
    _seen.push_back( 0 );
    _heap_pos.push_back( -1 );
    _model.push_back( false );
    _watches.resize( 2 );
}

Var Solver::new_var()
{
    const auto v = ++_num_vars;
    _assigns.push_back( 0 );
    _level.push_back( -1 );
    _reason.push_back( -1 );
    _phase.push_back( false );
    _activity.push_back( 0.0 );
    _seen.push_back( 0 );
    _heap_pos.push_back( -1 );
    _model.push_back( false );
    _watches.resize( 2 * static_cast< std::size_t >( v ) + 2 );
    heap_insert( v );
    return v;
}

void Solver::reserve_vars( Var n )
{
    while ( _num_vars < n )
        new_var();
}

bool Solver::in_core( Lit l ) const
{
    return std::find( _core.begin(), _core.end(), l ) != _core.end();
}

void Solver::bump( Var v, double amount )
{
    reserve_vars( v );
    _activity[ v ] += amount * _var_inc;
    if ( _heap_pos[ v ] >= 0 )
        heap_up( _heap_pos[ v ] );
}

int Solver::alloc_clause( std::vector< Lit > lits, bool learnt )
{
    auto data = ClauseData{ std::move( lits ), 0.0, learnt, false };

    if ( !_free_slots.empty() )
    {
        const auto id = _free_slots.back();
        _free_slots.pop_back();
        _clauses[ id ] = std::move( data );
        return id;
    }

    _clauses.push_back( std::move( data ) );
    return static_cast< int >( _clauses.size() - 1 );
}

void Solver::attach( int cref )
{
    const auto& c = _clauses[ cref ].lits;
    _watches[ c[ 0 ].index() ].push_back( { cref, c[ 1 ] } );
    _watches[ c[ 1 ].index() ].push_back( { cref, c[ 0 ] } );
}

int Solver::add_clause( std::span< const Lit > input )
{
    cancel_until( 0 );

    auto lits = std::vector< Lit >( input.begin(), input.end() );

    for ( const auto l : lits )
    {
        if ( l.var() <= 0 )
            throw std::invalid_argument( "clause literal with invalid variable" );
        reserve_vars( l.var() );
    }

    const auto tautology = !normalize_clause( lits );

    // true literals first, then unassigned, then false ones
    std::stable_sort( lits.begin(), lits.end(), [ & ]( Lit a, Lit b ) { return value( a ) > value( b ); } );

    const auto id = alloc_clause( lits, false );

    if ( tautology || !_ok )
        return id;

    if ( lits.empty() )
    {
        _ok = false;
        return id;
    }

    if ( lits.size() == 1 )
    {
        if ( value( lits[ 0 ] ) == 0 )
            enqueue( lits[ 0 ], id );
        else if ( value( lits[ 0 ] ) < 0 )
            _ok = false;
        return id;
    }

    attach( id );

    if ( value( lits[ 0 ] ) < 0 )
        _ok = false;
    else if ( value( lits[ 0 ] ) == 0 && value( lits[ 1 ] ) < 0 )
        enqueue( lits[ 0 ], id );

    return id;
}

void Solver::add_cnf( const Cnf& f )
{
    reserve_vars( f.num_vars() );

    for ( const auto& c : f.clauses() )
        add_clause( c );
}

void Solver::enqueue( Lit l, int reason )
{
    const auto v = l.var();
    _assigns[ v ] = l.negated() ? -1 : 1;
    _level[ v ] = level();
    _reason[ v ] = reason;
    _trail.push_back( l );
}

int Solver::propagate()
{
    auto confl = -1;

    while ( _qhead < _trail.size() )
    {
        const auto p = _trail[ _qhead++ ];
        const auto false_lit = ~p;
        auto& ws = _watches[ false_lit.index() ];
        ++_stats.propagations;

        std::size_t i = 0;
        std::size_t j = 0;

        while ( i < ws.size() )
        {
            const auto w = ws[ i ];

            if ( value( w.blocker ) > 0 )
            {
                ws[ j++ ] = ws[ i++ ];
                continue;
            }

            auto& c = _clauses[ w.cref ].lits;

            if ( c[ 0 ] == false_lit )
                std::swap( c[ 0 ], c[ 1 ] );

            ++i;
            const auto first = c[ 0 ];
            const auto nw = Watcher{ w.cref, first };

            if ( first != w.blocker && value( first ) > 0 )
            {
                ws[ j++ ] = nw;
                continue;
            }

            auto found = false;
            for ( std::size_t k = 2; k < c.size(); ++k )
            {
                if ( value( c[ k ] ) >= 0 )
                {
                    std::swap( c[ 1 ], c[ k ] );
                    _watches[ c[ 1 ].index() ].push_back( nw );
                    found = true;
                    break;
                }
            }

            if ( found )
                continue;

            ws[ j++ ] = nw;

            if ( value( first ) < 0 )
            {
                confl = w.cref;
                _qhead = _trail.size();
                while ( i < ws.size() )
                    ws[ j++ ] = ws[ i++ ];
            }
            else
            {
                enqueue( first, w.cref );
            }
        }

        ws.resize( j );

        if ( confl >= 0 )
            break;
    }

    return confl;
}

void Solver::analyze( int confl, std::vector< Lit >& learnt, int& backtrack_level )
{
    learnt.clear();
    learnt.push_back( Lit{} );

    auto path = 0;
    auto p = Lit{};
    auto have_p = false;
    auto index = static_cast< int >( _trail.size() ) - 1;

    do
    {
        if ( _clauses[ confl ].learnt )
            bump_clause( confl );

        const auto& c = _clauses[ confl ].lits;

        for ( std::size_t j = have_p ? 1 : 0; j < c.size(); ++j )
        {
            const auto q = c[ j ];
            const auto v = q.var();

            if ( !_seen[ v ] && _level[ v ] > 0 )
            {
                bump_var( v );
                _seen[ v ] = 1;

                if ( _level[ v ] >= level() )
                    ++path;
                else
                    learnt.push_back( q );
            }
        }

        while ( !_seen[ _trail[ index-- ].var() ] )
            ;

        p = _trail[ index + 1 ];
        have_p = true;
        confl = _reason[ p.var() ];
        _seen[ p.var() ] = 0;
        --path;
    } while ( path > 0 );

    learnt[ 0 ] = ~p;
    _analyze_clear.assign( learnt.begin() + 1, learnt.end() );

    // drop literals whose reason is subsumed by the rest of the clause
    auto kept = std::size_t{ 1 };
    for ( std::size_t i = 1; i < learnt.size(); ++i )
    {
        const auto r = _reason[ learnt[ i ].var() ];
        auto redundant = r >= 0;

        if ( redundant )
        {
            const auto& c = _clauses[ r ].lits;
            for ( std::size_t k = 1; k < c.size(); ++k )
            {
                const auto v = c[ k ].var();
                if ( !_seen[ v ] && _level[ v ] > 0 )
                {
                    redundant = false;
                    break;
                }
            }
        }

        if ( !redundant )
            learnt[ kept++ ] = learnt[ i ];
    }

    for ( const auto l : _analyze_clear )
        _seen[ l.var() ] = 0;

    learnt.resize( kept );

    if ( learnt.size() == 1 )
    {
        backtrack_level = 0;
        return;
    }

    auto max_i = std::size_t{ 1 };
    for ( std::size_t i = 2; i < learnt.size(); ++i )
        if ( _level[ learnt[ i ].var() ] > _level[ learnt[ max_i ].var() ] )
            max_i = i;

    std::swap( learnt[ 1 ], learnt[ max_i ] );
    backtrack_level = _level[ learnt[ 1 ].var() ];
}

void Solver::analyze_final( Lit p )
{
    _core.clear();
    _core.push_back( p );

    if ( level() == 0 || _level[ p.var() ] == 0 )
        return;

    _seen[ p.var() ] = 1;

    for ( auto i = static_cast< int >( _trail.size() ) - 1; i >= _trail_lim[ 0 ]; --i )
    {
        const auto x = _trail[ i ].var();

        if ( !_seen[ x ] )
            continue;

        if ( _reason[ x ] < 0 )
        {
            if ( _trail[ i ] != p )
                _core.push_back( _trail[ i ] );
        }
        else
        {
            const auto& c = _clauses[ _reason[ x ] ].lits;
            for ( std::size_t k = 1; k < c.size(); ++k )
                if ( _level[ c[ k ].var() ] > 0 )
                    _seen[ c[ k ].var() ] = 1;
        }

        _seen[ x ] = 0;
    }
}

void Solver::cancel_until( int lvl )
{
    if ( level() <= lvl )
        return;

    for ( auto c = static_cast< int >( _trail.size() ) - 1; c >= _trail_lim[ lvl ]; --c )
    {
        const auto v = _trail[ c ].var();
        _phase[ v ] = _assigns[ v ] > 0;
        _assigns[ v ] = 0;
        _reason[ v ] = -1;
        _level[ v ] = -1;
        heap_insert( v );
    }

    _trail.resize( _trail_lim[ lvl ] );
    _trail_lim.resize( lvl );
    _qhead = _trail.size();
}

Lit Solver::pick_branch()
{
    auto v = Var{ 0 };

    for ( const auto p : _priority )
    {
        if ( p > 0 && p <= _num_vars && _assigns[ p ] == 0 )
        {
            v = p;
            break;
        }
    }

    while ( v == 0 )
    {
        if ( _heap.empty() )
            return Lit{};
        const auto cand = heap_pop();
        if ( _assigns[ cand ] == 0 )
            v = cand;
    }

    switch ( _polarity )
    {
    case Polarity::false_first: return Lit::neg( v );
    case Polarity::true_first: return Lit::pos( v );
    case Polarity::phase_saving: return Lit{ v, !_phase[ v ] };
    }

    return Lit::neg( v );
}

void Solver::rebuild_watches()
{
    for ( auto& ws : _watches )
        std::erase_if( ws, [ & ]( const Watcher& w ) { return _clauses[ w.cref ].removed; } );
}

void Solver::reduce_db()
{
    std::sort( _learnt_refs.begin(), _learnt_refs.end(), [ & ]( int a, int b ) {
        return _clauses[ a ].activity < _clauses[ b ].activity;
    } );

    const auto locked = [ & ]( int cref ) {
        const auto& c = _clauses[ cref ].lits;
        const auto v = c[ 0 ].var();
        return _reason[ v ] == cref && value( c[ 0 ] ) > 0;
    };

    const auto half = _learnt_refs.size() / 2;
    auto kept = std::vector< int >{};
    auto any_removed = false;

    for ( std::size_t i = 0; i < _learnt_refs.size(); ++i )
    {
        const auto cref = _learnt_refs[ i ];
        auto& c = _clauses[ cref ];

        if ( i < half && c.lits.size() > 2 && !locked( cref ) )
        {
            c.removed = true;
            any_removed = true;
        }
        else
        {
            kept.push_back( cref );
        }
    }

    if ( any_removed )
    {
        rebuild_watches();
        for ( const auto cref : _learnt_refs )
        {
            if ( _clauses[ cref ].removed )
            {
                _clauses[ cref ].lits.clear();
                _clauses[ cref ].lits.shrink_to_fit();
                _free_slots.push_back( cref );
            }
        }
    }

    _learnt_refs = std::move( kept );
}

Status Solver::search( std::int64_t budget, std::span< const Lit > assumptions )
{
    auto conflicts = std::int64_t{ 0 };
    auto learnt = std::vector< Lit >{};

    for ( ;; )
    {
        const auto confl = propagate();

        if ( confl >= 0 )
        {
            ++_stats.conflicts;
            ++conflicts;

            if ( level() == 0 )
            {
                _ok = false;
                return Status::unsat;
            }

            auto backtrack = 0;
            analyze( confl, learnt, backtrack );
            cancel_until( backtrack );

            const auto cref = alloc_clause( learnt, true );
            ++_stats.learnts;

            if ( learnt.size() == 1 )
            {
                enqueue( learnt[ 0 ], cref );
            }
            else
            {
                attach( cref );
                _learnt_refs.push_back( cref );
                bump_clause( cref );
                enqueue( learnt[ 0 ], cref );
            }

            _var_inc /= var_decay;
            _cla_inc /= clause_decay;

            if ( _interrupt && _interrupt->load( std::memory_order_relaxed ) )
                return Status::unknown;

            continue;
        }

        if ( budget >= 0 && conflicts >= budget )
        {
            cancel_until( 0 );
            return Status::unknown;
        }

        if ( static_cast< double >( _learnt_refs.size() ) - static_cast< double >( _trail.size() ) >= _max_learnts )
            reduce_db();

        auto next = Lit{};

        while ( level() < static_cast< int >( assumptions.size() ) )
        {
            const auto a = assumptions[ level() ];

            if ( value( a ) > 0 )
            {
                _trail_lim.push_back( static_cast< int >( _trail.size() ) );
            }
            else if ( value( a ) < 0 )
            {
                analyze_final( a );
                return Status::unsat;
            }
            else
            {
                next = a;
                break;
            }
        }

        if ( next.var() == 0 )
        {
            ++_stats.decisions;
            next = pick_branch();
            if ( next.var() == 0 )
                return Status::sat;
        }

        _trail_lim.push_back( static_cast< int >( _trail.size() ) );
        enqueue( next, -1 );
    }
}

Status Solver::solve( std::span< const Lit > assumptions )
{
    ++_stats.solves;
    _core.clear();
    cancel_until( 0 );

    for ( const auto a : assumptions )
        reserve_vars( a.var() );

    if ( !_ok )
        return Status::unsat;

    _max_learnts = std::max( 2000.0, static_cast< double >( _clauses.size() ) / 3.0 );

    auto status = Status::unknown;
    const auto start_conflicts = _stats.conflicts;
    auto restarts = 0;

    while ( status == Status::unknown )
    {
        if ( _interrupt && _interrupt->load( std::memory_order_relaxed ) )
            break;

        if ( _conflict_limit >= 0 &&
             static_cast< std::int64_t >( _stats.conflicts - start_conflicts ) > _conflict_limit )
            break;

        const auto budget = static_cast< std::int64_t >( luby( 2.0, restarts ) * restart_base );
        status = search( budget, assumptions );

        if ( status == Status::unknown )
        {
            ++restarts;
            ++_stats.restarts;
            _max_learnts *= 1.1;
        }
    }

    if ( status == Status::sat )
    {
        for ( Var v = 1; v <= _num_vars; ++v )
            _model[ v ] = _assigns[ v ] > 0;
    }

    cancel_until( 0 );
    return status;
}

ImplicationView Solver::propagate_with( std::span< const Lit > assignment, std::span< const Var > required )
{
    cancel_until( 0 );

    for ( const auto l : assignment )
        reserve_vars( l.var() );

    if ( !_ok || propagate() >= 0 )
    {
        _ok = false;
        throw inconsistent_assignment( "clause database is unsatisfiable" );
    }

    _trail_lim.push_back( static_cast< int >( _trail.size() ) );

    for ( const auto l : assignment )
    {
        if ( value( l ) < 0 )
        {
            cancel_until( 0 );
            throw inconsistent_assignment( "assignment contradicts literal " + std::to_string( l.to_dimacs() ) );
        }
        if ( value( l ) == 0 )
            enqueue( l, -1 );
    }

    if ( propagate() >= 0 )
    {
        cancel_until( 0 );
        throw inconsistent_assignment( "assignment is not consistent with the clauses" );
    }

    auto view = ImplicationView{};
    view.value.assign( static_cast< std::size_t >( _num_vars ) + 1, 0 );
    view.reason.assign( static_cast< std::size_t >( _num_vars ) + 1, ImplicationView::unassigned );
    view.order.assign( static_cast< std::size_t >( _num_vars ) + 1, -1 );
    view.trail = _trail;

    for ( std::size_t k = 0; k < _trail.size(); ++k )
    {
        const auto v = _trail[ k ].var();
        view.value[ v ] = _assigns[ v ];
        view.reason[ v ] = _reason[ v ] >= 0 ? _reason[ v ] : ImplicationView::decision;
        view.order[ v ] = static_cast< int >( k );
    }

    cancel_until( 0 );

    for ( const auto v : required )
        if ( v > _num_vars || view.value[ v ] == 0 )
            throw incomplete_propagation( "variable " + std::to_string( v ) + " is not implied by propagation" );

    return view;
}

void Solver::write_dimacs( std::ostream& os ) const
{
    auto count = std::size_t{ 0 };
    for ( const auto& c : _clauses )
        if ( !c.learnt && !c.removed )
            ++count;

    os << "p cnf " << _num_vars << ' ' << count << '\n';

    for ( const auto& c : _clauses )
    {
        if ( c.learnt || c.removed )
            continue;
        for ( const auto l : c.lits )
            os << l.to_dimacs() << ' ';
        os << "0\n";
    }
}

bool Solver::heap_less( Var a, Var b ) const
{
    if ( _activity[ a ] != _activity[ b ] )
        return _activity[ a ] > _activity[ b ];
    return a < b;
}

void Solver::heap_insert( Var v )
{
    if ( _heap_pos[ v ] >= 0 )
        return;

    _heap_pos[ v ] = static_cast< int >( _heap.size() );
    _heap.push_back( v );
    heap_up( _heap_pos[ v ] );
}

void Solver::heap_up( int pos )
{
    const auto v = _heap[ pos ];

    while ( pos > 0 )
    {
        const auto parent = ( pos - 1 ) / 2;
        if ( !heap_less( v, _heap[ parent ] ) )
            break;
        _heap[ pos ] = _heap[ parent ];
        _heap_pos[ _heap[ pos ] ] = pos;
        pos = parent;
    }

    _heap[ pos ] = v;
    _heap_pos[ v ] = pos;
}

void Solver::heap_down( int pos )
{
    const auto v = _heap[ pos ];
    const auto size = static_cast< int >( _heap.size() );

    for ( ;; )
    {
        auto child = 2 * pos + 1;
        if ( child >= size )
            break;
        if ( child + 1 < size && heap_less( _heap[ child + 1 ], _heap[ child ] ) )
            ++child;
        if ( !heap_less( _heap[ child ], v ) )
            break;
        _heap[ pos ] = _heap[ child ];
        _heap_pos[ _heap[ pos ] ] = pos;
        pos = child;
    }

    _heap[ pos ] = v;
    _heap_pos[ v ] = pos;
}

Var Solver::heap_pop()
{
    const auto top = _heap.front();
    _heap_pos[ top ] = -1;
    const auto last = _heap.back();
    _heap.pop_back();

    if ( !_heap.empty() )
    {
        _heap[ 0 ] = last;
        _heap_pos[ last ] = 0;
        heap_down( 0 );
    }

    return top;
}

void Solver::bump_var( Var v )
{
    _activity[ v ] += _var_inc;

    if ( _activity[ v ] > 1e100 )
    {
        for ( auto& a : _activity )
            a *= 1e-100;
        _var_inc *= 1e-100;
    }

    if ( _heap_pos[ v ] >= 0 )
        heap_up( _heap_pos[ v ] );
}

void Solver::bump_clause( int cref )
{
    auto& c = _clauses[ cref ];
    c.activity += _cla_inc;

    if ( c.activity > 1e20 )
    {
        for ( const auto r : _learnt_refs )
            _clauses[ r ].activity *= 1e-20;
        _cla_inc *= 1e-20;
    }
}

} // namespace pogen::sat
