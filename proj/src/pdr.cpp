#include "pogen/pdr.hpp"

#include "pogen/oracle.hpp"
#include "pogen/sat.hpp"

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <sstream>
#include <thread>

namespace pogen::pdr
{

std::string_view to_string( Result r )
{
    switch ( r )
    {
    case Result::safe: return "safe";
    case Result::unsafe: return "unsafe";
    case Result::unknown: return "unknown";
    }
    return "unknown";
}

double EngineStats::mean_clause_size() const
{
    return clauses == 0 ? 0.0 : static_cast< double >( clause_literals ) / static_cast< double >( clauses );
}

double EngineStats::reduction_ratio() const
{
    return state_literals == 0 ? 0.0 : static_cast< double >( removed_literals ) / static_cast< double >( state_literals );
}

double EngineStats::generalization_share() const
{
    const auto total = total_time.count();
    return total <= 0.0 ? 0.0 : std::min( 1.0, generalization_time.count() / total );
}

namespace
{

struct stop_search
{
    std::string reason;
};

Cube project( const Assignment& model, const std::vector< Var >& vars )
{
    auto lits = std::vector< Lit >{};
    for ( const auto v : vars )
        lits.emplace_back( v, !model[ v ] );
    return Cube{ std::move( lits ) };
}

Var top_of( const TransitionSystem& ts )
{
    auto top = ts.num_vars;
    for ( const auto* f : { &ts.init, &ts.bad, &ts.trans } )
        top = std::max( top, f->num_vars() );
    if ( ts.constraint )
        top = std::max( top, ts.constraint->num_vars() );
    return top;
}

// One SAT instance per frame. T is guarded by `act_trans` and the bad
// predicate by `act_bad`, so one instance answers both kinds of query.
struct FrameSolver
{
    sat::Solver solver;
    Lit act_trans;
    Lit act_bad;

    FrameSolver( const TransitionSystem& ts, const Cnf& full, Var top, const std::atomic< bool >* cancel )
        : solver{ top }
    {
        act_trans = Lit::pos( solver.new_var() );
        act_bad = Lit::pos( solver.new_var() );
        solver.set_interrupt( cancel );
        for ( const auto& c : full.clauses() )
            add_guarded( c, act_trans );
        for ( const auto& c : ts.bad.clauses() )
            add_guarded( c, act_bad );
    }

    void add_guarded( const Clause& c, Lit act )
    {
        auto lits = std::vector< Lit >( c.begin(), c.end() );
        lits.push_back( ~act );
        solver.add_clause( lits );
    }
};

struct Obligation
{
    Cube cube;
    int level = 0;
    int parent = -1; // index into the arena, the cube this one must reach
    std::size_t depth = 0;
};

class Engine
{
public:
    Engine( std::shared_ptr< const TransitionSystem > ts, const EngineConfig& config )
        : _ts{ std::move( ts ) }, _config{ config }, _full{ _ts->full_trans() }, _top{ top_of( *_ts ) },
          _init_cube{ _ts->init_cube() }, _cancel{ config.cancel ? config.cancel.get() : nullptr }
    {
        _ctx.options = config.gen;
        _init_solver = std::make_unique< sat::Solver >( _top );
        _init_solver->add_cnf( _ts->init );
        _init_solver->set_interrupt( _cancel );
    }

    Verdict run()
    {
        _start = std::chrono::steady_clock::now();
        auto v = Verdict{};
        v.strategy = _config.custom_generalizer ? "custom" : to_string( _config.strategy );

        try
        {
            v = search( std::move( v ) );
        }
        catch ( const stop_search& s )
        {
            v.result = Result::unknown;
            v.reason = s.reason;
        }

        _stats.frames = _delta.size();
        _stats.total_time = std::chrono::steady_clock::now() - _start;
        v.stats = _stats;
        return v;
    }

private:
    std::shared_ptr< const TransitionSystem > _ts;
    EngineConfig _config;
    Cnf _full;
    Var _top;
    std::optional< Cube > _init_cube;
    const std::atomic< bool >* _cancel;

    GenContext _ctx;
    EngineStats _stats;
    std::chrono::steady_clock::time_point _start;

    std::unique_ptr< sat::Solver > _init_solver;
    // _solvers[0] is I ∧ T; _solvers[k] holds the clauses of levels ≥ k
    std::vector< std::unique_ptr< FrameSolver > > _solvers;
    // _delta[k]: clauses whose highest level is k (index 0 unused)
    std::vector< std::vector< Clause > > _delta;
    std::vector< Obligation > _arena;

    int frontier() const { return static_cast< int >( _delta.size() ) - 1; }

    void poll()
    {
        if ( _cancel && _cancel->load() )
            throw stop_search{ "cancelled" };
        const auto& lim = _config.limits;
        if ( lim.seconds > 0.0 &&
             std::chrono::duration< double >( std::chrono::steady_clock::now() - _start ).count() > lim.seconds )
            throw stop_search{ "time limit" };
        if ( lim.obligations > 0 && _stats.obligations > lim.obligations )
            throw stop_search{ "obligation limit" };
    }

    sat::Status solve( sat::Solver& s, std::span< const Lit > assumptions )
    {
        ++_stats.sat_calls;
        const auto r = s.solve( assumptions );
        if ( r == sat::Status::unknown )
            throw stop_search{ "cancelled" };
        return r;
    }

    void open_frame()
    {
        if ( _solvers.empty() )
        {
            auto zero = std::make_unique< FrameSolver >( *_ts, _full, _top, _cancel );
            zero->solver.add_cnf( _ts->init );
            _solvers.push_back( std::move( zero ) );
            _delta.emplace_back();
        }
        _solvers.push_back( std::make_unique< FrameSolver >( *_ts, _full, _top, _cancel ) );
        _delta.emplace_back();
    }

    bool intersects_init( const Cube& c )
    {
        if ( _init_cube )
            return std::none_of( c.begin(), c.end(), [ & ]( Lit l ) { return _init_cube->contains( ~l ); } );
        return solve( *_init_solver, c.literals() ) == sat::Status::sat;
    }

    // Frame R_k as a CNF over the state variables (R_0 = I).
    Cnf frame_cnf( int k ) const
    {
        if ( k == 0 )
            return _ts->init;
        auto f = Cnf{};
        for ( int j = k; j <= frontier(); ++j )
            for ( const auto& c : _delta[ j ] )
                f.add( c );
        f.set_num_vars( std::max( f.num_vars(), _ts->num_vars ) );
        return f;
    }

    bool blocked_syntactically( const Cube& c, int k ) const
    {
        for ( int j = k; j <= frontier(); ++j )
            for ( const auto& cl : _delta[ j ] )
                if ( subsumes( cl.negate(), c ) )
                    return true;
        return false;
    }

    // SAT?[R_{k-1} ∧ ¬c ∧ T ∧ c′]; on unsat `core` gets the literals of c
    // whose primed copies were needed.
    bool consecution( const Cube& c, int k, Cube* core, Assignment* model )
    {
        auto& fs = *_solvers[ k - 1 ];
        const auto act = Lit::pos( fs.solver.new_var() );

        auto temp = std::vector< Lit >{ ~act };
        for ( const auto l : c )
            temp.push_back( ~l );
        fs.solver.add_clause( temp );

        auto assumptions = std::vector< Lit >{ fs.act_trans, act };
        for ( const auto l : c )
            assumptions.push_back( _ts->primed( l ) );

        const auto r = solve( fs.solver, assumptions );
        if ( r == sat::Status::sat && model )
            *model = fs.solver.model();
        if ( r == sat::Status::unsat && core )
        {
            auto lits = std::vector< Lit >{};
            for ( const auto l : c )
                if ( fs.solver.in_core( _ts->primed( l ) ) )
                    lits.push_back( l );
            *core = Cube{ std::move( lits ) };
        }
        fs.solver.add_clause( { ~act } );
        return r == sat::Status::sat;
    }

    Cube generalize_clause( const Cube& cube, int k )
    {
        auto c = cube;

        for ( std::size_t idx = 0; idx < c.size(); )
        {
            poll();
            const auto l = c.literals()[ idx ];
            const auto trial = c.without( l );
            auto core = Cube{};
            if ( trial.empty() || intersects_init( trial ) || consecution( trial, k, &core, nullptr ) )
            {
                ++idx;
                continue;
            }
            c = !intersects_init( core ) && !core.empty() ? core : trial;
            idx = 0;
        }
        return c;
    }

    void add_clause( const Cube& c, int level )
    {
        auto cl = c.negate();
        for ( int j = 1; j <= level; ++j )
            _solvers[ j ]->solver.add_clause( cl );
        _stats.clauses += 1;
        _stats.clause_literals += cl.size();
        _delta[ level ].push_back( std::move( cl ) );
    }

    // States of the bad cube found in the frontier query: every state of
    // the returned cube is bad.
    Cube bad_cube( const Assignment& model ) const
    {
        auto rows = std::vector< std::vector< Lit > >{};
        for ( const auto& c : _ts->bad.clauses() )
        {
            auto hit = false;
            auto lits = std::vector< Lit >{};
            for ( const auto l : c )
            {
                if ( model[ l.var() ] == l.negated() )
                    continue;
                if ( _ts->state_pos( l.var() ) >= 0 )
                    lits.push_back( l );
                else
                    hit = true;
            }
            if ( !hit )
                rows.push_back( std::move( lits ) );
        }

        const auto m = project( model, _ts->state );
        auto kept = std::vector< Lit >{};
        while ( !rows.empty() )
        {
            auto best = Lit{};
            auto count = std::size_t{ 0 };
            for ( const auto l : m )
            {
                const auto n = static_cast< std::size_t >( std::count_if(
                    rows.begin(), rows.end(), [ & ]( const auto& r ) { return std::find( r.begin(), r.end(), l ) != r.end(); } ) );
                if ( n > count )
                {
                    count = n;
                    best = l;
                }
            }
            if ( count == 0 )
                throw certificate_error( "bad model does not satisfy the bad predicate" );
            kept.push_back( best );
            std::erase_if( rows, [ & ]( const auto& r ) { return std::find( r.begin(), r.end(), best ) != r.end(); } );
        }
        return Cube{ std::move( kept ) };
    }

    Cube generalize_po( const PogpInstance& p )
    {
        const auto start = std::chrono::steady_clock::now();
        auto c = Cube{};
        if ( _config.custom_generalizer )
            c = _config.custom_generalizer( p );
        else
            c = generalize( _config.strategy, p, _ctx ).cube;
        _stats.generalization_time += std::chrono::steady_clock::now() - start;
        _stats.generalizations += 1;
        _stats.state_literals += p.m.size();
        _stats.removed_literals += p.m.size() - std::min( p.m.size(), c.size() );
        return c;
    }

    void verify( const Cube& c, const PogpInstance& p )
    {
        const auto* frame = _config.strategy.mode == Mode::free ? &p.frame : nullptr;
        const auto r = verify_po( *_ts, c, p.d_next, frame );
        if ( !r.sound )
            throw soundness_alarm( "generalized PO " + to_string( c ) + " has a state without successor in " +
                                       to_string( p.d_next ),
                                   c, r.witness );
    }

    // Processes obligations until the queue is empty (true) or a
    // counterexample chain ending in `root` is found (false).
    std::optional< int > block( int root )
    {
        const auto cmp = [ & ]( int a, int b ) {
            const auto& x = _arena[ a ];
            const auto& y = _arena[ b ];
            return std::tie( x.level, x.depth ) > std::tie( y.level, y.depth );
        };
        auto queue = std::priority_queue< int, std::vector< int >, decltype( cmp ) >{ cmp };
        queue.push( root );

        while ( !queue.empty() )
        {
            poll();
            const auto id = queue.top();
            const auto ob = _arena[ id ];
            const auto k = ob.level;

            if ( blocked_syntactically( ob.cube, k ) )
            {
                queue.pop();
                requeue( queue, id );
                continue;
            }

            auto model = Assignment{};
            auto core = Cube{};
            if ( consecution( ob.cube, k, &core, &model ) )
            {
                auto p = PogpInstance{};
                p.ts = _ts;
                p.frame = frame_cnf( k - 1 );
                p.d = ob.cube;
                p.d_next = _ts->primed( ob.cube );
                p.m = project( model, _ts->state );
                p.i = project( model, _ts->input );
                p.t_next = project( model, _ts->next );
                p.level = k;

                if ( _config.on_pogp )
                    _config.on_pogp( p );

                if ( k == 1 )
                {
                    // m is an initial state
                    _arena.push_back( { p.m, 0, id, ob.depth + 1 } );
                    return static_cast< int >( _arena.size() ) - 1;
                }

                const auto c = generalize_po( p );
                if ( _config.verify_pos )
                    verify( c, p );

                ++_stats.obligations;
                _arena.push_back( { c, k - 1, id, ob.depth + 1 } );
                const auto child = static_cast< int >( _arena.size() ) - 1;

                if ( intersects_init( c ) )
                {
                    verify( c, p );
                    return child;
                }
                queue.push( child );
                continue;
            }

            queue.pop();
            auto cube = !core.empty() && !intersects_init( core ) ? core : ob.cube;
            cube = generalize_clause( cube, k );

            auto level = k;
            while ( level < frontier() && !consecution( cube, level + 1, nullptr, nullptr ) )
                ++level;
            add_clause( cube, level );
            requeue( queue, id );
        }

        return std::nullopt;
    }

    template < typename Queue >
    void requeue( Queue& queue, int id )
    {
        if ( !_config.forward_obligations )
            return;
        const auto& ob = _arena[ id ];
        const auto next = ob.level + 1;
        if ( next > frontier() )
            return;
        // keep levels strictly increasing along successor links
        if ( ob.parent >= 0 && next >= _arena[ ob.parent ].level )
            return;
        _arena.push_back( { ob.cube, next, ob.parent, ob.depth } );
        queue.push( static_cast< int >( _arena.size() ) - 1 );
    }

    // true: invariant found at some level
    std::optional< int > propagate()
    {
        for ( int k = 1; k < frontier(); ++k )
        {
            poll();
            auto keep = std::vector< Clause >{};
            auto moving = std::move( _delta[ k ] );
            _delta[ k ].clear();
            for ( auto& cl : moving )
            {
                const auto cube = cl.negate();
                if ( !consecution_plain( cube, k + 1 ) )
                {
                    _solvers[ k + 1 ]->solver.add_clause( cl );
                    _delta[ k + 1 ].push_back( std::move( cl ) );
                }
                else
                {
                    keep.push_back( std::move( cl ) );
                }
            }
            _delta[ k ] = std::move( keep );
            if ( _delta[ k ].empty() )
                return k;
        }
        return std::nullopt;
    }

    // SAT?[R_{k-1} ∧ T ∧ c′] without ¬c; the clause ¬c is already in R_{k-1}
    bool consecution_plain( const Cube& c, int k )
    {
        auto& fs = *_solvers[ k - 1 ];
        auto assumptions = std::vector< Lit >{ fs.act_trans };
        for ( const auto l : c )
            assumptions.push_back( _ts->primed( l ) );
        return solve( fs.solver, assumptions ) == sat::Status::sat;
    }

    std::vector< TraceStep > rebuild( int last )
    {
        // cubes from the initial end to the bad end
        auto chain = std::vector< Cube >{};
        for ( auto id = last; id >= 0; id = _arena[ id ].parent )
            chain.push_back( _arena[ id ].cube );

        auto s = sat::Solver{ _top };
        s.add_cnf( _ts->init );
        if ( s.solve( chain[ 0 ] ) != sat::Status::sat )
            throw certificate_error( "first obligation contains no initial state" );
        auto state = project( s.model(), _ts->state );

        auto step = sat::Solver{ _top };
        step.add_cnf( _full );
        auto trace = std::vector< TraceStep >{};

        for ( std::size_t j = 1; j < chain.size(); ++j )
        {
            auto assumptions = std::vector< Lit >( state.begin(), state.end() );
            for ( const auto l : chain[ j ] )
                assumptions.push_back( _ts->primed( l ) );
            if ( step.solve( assumptions ) != sat::Status::sat )
                throw soundness_alarm( "state " + to_string( state ) + " has no successor in " + to_string( chain[ j ] ),
                                       chain[ j - 1 ], state );
            trace.push_back( { state, project( step.model(), _ts->input ) } );
            state = _ts->unprimed( project( step.model(), _ts->next ) );
        }

        auto last_step = sat::Solver{ _top };
        last_step.add_cnf( _ts->bad );
        if ( last_step.solve( state ) != sat::Status::sat )
            throw certificate_error( "last state is not bad" );
        trace.push_back( { state, project( last_step.model(), _ts->input ) } );
        return trace;
    }

    Verdict search( Verdict v )
    {
        {
            auto s = sat::Solver{ _top };
            s.add_cnf( _ts->init );
            s.add_cnf( _ts->bad );
            if ( solve( s, {} ) == sat::Status::sat )
            {
                const auto m = project( s.model(), _ts->state );
                v.result = Result::unsafe;
                v.trace = { { m, project( s.model(), _ts->input ) } };
                return v;
            }
        }

        open_frame();

        for ( ;; )
        {
            poll();
            if ( _config.limits.frames > 0 && static_cast< std::size_t >( frontier() ) > _config.limits.frames )
                throw stop_search{ "frame limit" };

            auto& fs = *_solvers[ frontier() ];
            while ( solve( fs.solver, std::vector< Lit >{ fs.act_bad } ) == sat::Status::sat )
            {
                const auto c = bad_cube( fs.solver.model() );
                ++_stats.obligations;
                _arena.push_back( { c, frontier(), -1, 0 } );
                if ( const auto cex = block( static_cast< int >( _arena.size() ) - 1 ) )
                {
                    v.result = Result::unsafe;
                    v.trace = rebuild( *cex );
                    return v;
                }
            }

            open_frame();
            if ( const auto k = propagate() )
            {
                v.result = Result::safe;
                for ( int j = *k + 1; j <= frontier(); ++j )
                    v.invariant.insert( v.invariant.end(), _delta[ j ].begin(), _delta[ j ].end() );
                return v;
            }
        }
    }
};

std::vector< TraceStep > to_forward( const TransitionSystem& original, const TransitionSystem& reversed,
                                     const std::vector< TraceStep >& trace )
{
    const auto map_state = [ & ]( const Cube& c ) {
        auto lits = std::vector< Lit >{};
        for ( const auto l : c )
            lits.emplace_back( original.state[ reversed.state_pos( l.var() ) ], l.negated() );
        return Cube{ std::move( lits ) };
    };
    const auto map_input = [ & ]( const Cube& c ) {
        auto lits = std::vector< Lit >{};
        for ( const auto l : c )
            lits.emplace_back( original.input[ reversed.input_pos( l.var() ) ], l.negated() );
        return Cube{ std::move( lits ) };
    };

    // (r_j, ι_j, r_{j+1}) ∈ T_rev  ⇔  (r_{j+1}, ι_j, r_j) ∈ T
    const auto n = trace.size();
    auto out = std::vector< TraceStep >{};
    for ( std::size_t j = 0; j < n; ++j )
    {
        const auto& src = trace[ n - 1 - j ];
        const auto input = j + 1 < n ? map_input( trace[ n - 2 - j ].input ) : Cube{};
        out.push_back( { map_state( src.state ), input } );
    }
    return out;
}

// Full input cube for the final step of a forward trace: the one the bad
// predicate needs, if it reads inputs.
void complete_last_input( const TransitionSystem& ts, std::vector< TraceStep >& trace )
{
    if ( trace.empty() )
        return;
    auto s = sat::Solver{ top_of( ts ) };
    s.add_cnf( ts.bad );
    if ( s.solve( trace.back().state ) == sat::Status::sat )
        trace.back().input = project( s.model(), ts.input );
}

} // namespace

Verdict check( std::shared_ptr< const TransitionSystem > ts, const EngineConfig& config )
{
    if ( !config.custom_generalizer )
    {
        auto target = config.reverse ? std::make_shared< const TransitionSystem >( reverse( *ts ) ) : ts;
        if ( auto why = check_applicable( config.strategy, *target, config.gen ) )
            throw inapplicable_strategy( std::move( *why ) );
    }

    if ( !config.reverse )
    {
        auto v = Engine{ ts, config }.run();
        if ( v.result == Result::safe )
            if ( auto problem = invariant_problem( *ts, v.invariant ) )
                throw certificate_error( "invariant rejected: " + *problem );
        if ( v.result == Result::unsafe )
            if ( auto problem = trace_problem( *ts, v.trace ) )
                throw certificate_error( "trace rejected: " + *problem );
        return v;
    }

    const auto rev = std::make_shared< const TransitionSystem >( reverse( *ts ) );
    auto v = Engine{ rev, config }.run();
    v.reversed = true;

    if ( v.result == Result::safe )
        if ( auto problem = invariant_problem( *rev, v.invariant ) )
            throw certificate_error( "invariant rejected: " + *problem );
    if ( v.result == Result::unsafe )
    {
        v.trace = to_forward( *ts, *rev, v.trace );
        complete_last_input( *ts, v.trace );
        if ( auto problem = trace_problem( *ts, v.trace ) )
            throw certificate_error( "trace rejected: " + *problem );
    }
    return v;
}

Verdict portfolio( std::shared_ptr< const TransitionSystem > ts, const std::vector< EngineConfig >& configs )
{
    if ( configs.size() == 1 )
        return check( ts, configs[ 0 ] );

    auto cancel = std::make_shared< std::atomic< bool > >( false );
    auto mutex = std::mutex{};
    auto done = std::condition_variable{};
    auto winner = std::optional< Verdict >{};
    auto fallback = std::optional< Verdict >{};
    auto error = std::exception_ptr{};
    auto finished = std::size_t{ 0 };

    auto workers = std::vector< std::jthread >{};
    for ( const auto& base : configs )
    {
        auto cfg = base;
        cfg.cancel = cancel;
        workers.emplace_back( [ &, cfg ] {
            auto result = std::optional< Verdict >{};
            auto failure = std::exception_ptr{};
            try
            {
                result = check( ts, cfg );
            }
            catch ( ... )
            {
                failure = std::current_exception();
            }

            const auto lock = std::lock_guard{ mutex };
            ++finished;
            if ( result && result->result != Result::unknown && !winner )
            {
                winner = std::move( result );
                cancel->store( true );
            }
            else if ( result && !fallback )
                fallback = std::move( result );
            else if ( failure && !error )
                error = failure;
            done.notify_all();
        } );
    }

    {
        auto lock = std::unique_lock{ mutex };
        done.wait( lock, [ & ] { return winner.has_value() || finished == configs.size(); } );
    }
    workers.clear(); // joins

    if ( winner )
        return *winner;
    if ( error )
        std::rethrow_exception( error );
    return fallback ? *fallback : Verdict{};
}

std::optional< std::string > invariant_problem( const TransitionSystem& ts, const std::vector< Clause >& invariant )
{
    const auto top = top_of( ts );
    auto inv = Cnf{};
    for ( const auto& c : invariant )
    {
        for ( const auto l : c )
            if ( ts.state_pos( l.var() ) < 0 )
                return "clause " + to_string( c ) + " mentions a non-state variable";
        inv.add( c );
    }

    {
        auto s = sat::Solver{ top };
        s.add_cnf( ts.init );
        for ( const auto& c : invariant )
            if ( s.solve( c.negate() ) == sat::Status::sat )
                return "an initial state violates " + to_string( c );
    }
    {
        auto s = sat::Solver{ top };
        s.add_cnf( inv );
        s.add_cnf( ts.bad );
        if ( s.solve() == sat::Status::sat )
            return "the invariant contains a bad state";
    }
    {
        auto s = sat::Solver{ top };
        s.add_cnf( inv );
        s.add_cnf( ts.full_trans() );
        for ( const auto& c : invariant )
            if ( s.solve( ts.primed( c.negate() ) ) == sat::Status::sat )
                return "the invariant is not closed under T at " + to_string( c );
    }
    return std::nullopt;
}

std::optional< std::string > trace_problem( const TransitionSystem& ts, const std::vector< TraceStep >& trace )
{
    if ( trace.empty() )
        return "empty trace";

    const auto top = top_of( ts );
    for ( const auto& step : trace )
    {
        if ( step.state.size() != ts.state.size() )
            return "state " + to_string( step.state ) + " is not a minterm";
        for ( const auto l : step.state )
            if ( ts.state_pos( l.var() ) < 0 )
                return "state " + to_string( step.state ) + " mentions a non-state variable";
    }

    {
        auto s = sat::Solver{ top };
        s.add_cnf( ts.init );
        if ( s.solve( trace.front().state ) != sat::Status::sat )
            return "first state is not initial";
    }
    {
        auto s = sat::Solver{ top };
        s.add_cnf( ts.full_trans() );
        for ( std::size_t j = 0; j + 1 < trace.size(); ++j )
        {
            auto assumptions = std::vector< Lit >( trace[ j ].state.begin(), trace[ j ].state.end() );
            assumptions.insert( assumptions.end(), trace[ j ].input.begin(), trace[ j ].input.end() );
            for ( const auto l : trace[ j + 1 ].state )
                assumptions.push_back( ts.primed( l ) );
            if ( s.solve( assumptions ) != sat::Status::sat )
                return "step " + std::to_string( j ) + " is not a transition";
        }
    }
    {
        auto s = sat::Solver{ top };
        s.add_cnf( ts.bad );
        auto assumptions = std::vector< Lit >( trace.back().state.begin(), trace.back().state.end() );
        assumptions.insert( assumptions.end(), trace.back().input.begin(), trace.back().input.end() );
        if ( s.solve( assumptions ) != sat::Status::sat )
            return "last state is not bad";
    }
    return std::nullopt;
}

std::string aiger_witness( const TransitionSystem& ts, const std::vector< TraceStep >& trace )
{
    auto os = std::ostringstream{};
    os << "1\nb0\n";
    if ( trace.empty() )
        return os.str() + ".\n";

    for ( const auto v : ts.state )
        os << ( trace.front().state.contains( Lit::pos( v ) ) ? '1' : '0' );
    os << '\n';
    for ( const auto& step : trace )
    {
        for ( const auto v : ts.input )
            os << ( step.input.contains( Lit::pos( v ) ) ? '1' : '0' );
        os << '\n';
    }
    os << ".\n";
    return os.str();
}

} // namespace pogen::pdr
