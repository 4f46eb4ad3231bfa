#include "pogen/strategies.hpp"

#include "pogen/encode.hpp"
#include "pogen/optsolvers.hpp"
#include "pogen/ternary.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace pogen
{

namespace
{

struct MethodName
{
    Method method;
    std::string_view name;
};

constexpr std::array< MethodName, 14 > method_names{ {
    { Method::sim01x, "01x-sim" },
    { Method::lifting, "lifting" },
    { Method::lifting_ld, "lifting-ld" },
    { Method::igbg, "igbg" },
    { Method::s01x, "s01x" },
    { Method::ms01x, "ms01x" },
    { Method::ms01x_igbg, "ms01x-igbg" },
    { Method::greedy_cover, "greedy-cover" },
    { Method::gentr, "gentr" },
    { Method::ilp_cover, "ilp-cover" },
    { Method::sat_cover, "sat-cover" },
    { Method::greedy_qbf, "greedy-qbf" },
    { Method::max_qbf, "max-qbf" },
    { Method::structural, "structural" },
} };

Var top_var( const PogpInstance& p )
{
    return std::max( p.ts->num_vars, p.frame.num_vars() );
}

const CircuitLink& circuit_of( const PogpInstance& p )
{
    if ( !p.ts->circuit )
        throw strategy_error( "system has no circuit" );
    return *p.ts->circuit;
}

Cube without_vars( const Cube& m, const std::vector< Var >& vars )
{
    auto lits = std::vector< Lit >{};
    for ( const auto l : m )
        if ( std::find( vars.begin(), vars.end(), l.var() ) == vars.end() )
            lits.push_back( l );
    return Cube{ std::move( lits ) };
}

Cube core_part( const sat::Solver& s, const Cube& m )
{
    auto lits = std::vector< Lit >{};
    for ( const auto l : m )
        if ( s.in_core( l ) )
            lits.push_back( l );
    return Cube{ std::move( lits ) };
}

void append( std::vector< Lit >& out, std::span< const Lit > lits )
{
    out.insert( out.end(), lits.begin(), lits.end() );
}

// Clauses of T not hit by the non-state part of the model, restricted to
// their m-literals.
std::vector< Clause > cover_rows( const PogpInstance& p )
{
    const auto model = full_model( p );
    const auto& ts = *p.ts;
    auto rows = std::vector< Clause >{};

    const auto full = ts.full_trans();
    for ( const auto& clause : full.clauses() )
    {
        auto hit = false;
        auto lits = std::vector< Lit >{};
        for ( const auto l : clause )
        {
            if ( model[ l.var() ] == l.negated() )
                continue;
            if ( ts.state_pos( l.var() ) >= 0 )
                lits.push_back( l );
            else
                hit = true;
        }
        if ( hit )
            continue;
        if ( lits.empty() )
            throw strategy_error( "model does not satisfy T" );
        rows.emplace_back( std::move( lits ) );
    }

    return rows;
}

// ¬d ∧ R ∧ T ∧ d′
Cnf free_matrix( const PogpInstance& p )
{
    auto f = p.ts->full_trans();
    f.append( p.frame );
    if ( !p.d.empty() )
        f.add( p.d.negate() );
    for ( const auto l : p.d_next )
        f.add( { l } );
    f.set_num_vars( std::max( f.num_vars(), top_var( p ) ) );
    return f;
}

Cube cube_from_rails( const TransitionSystem& ts, const std::vector< Rail >& rails, const Assignment& model )
{
    auto lits = std::vector< Lit >{};
    for ( std::size_t k = 0; k < ts.state.size(); ++k )
    {
        if ( model[ rails[ k ].zero ] )
            lits.push_back( Lit::neg( ts.state[ k ] ) );
        else if ( model[ rails[ k ].one ] )
            lits.push_back( Lit::pos( ts.state[ k ] ) );
    }
    return Cube{ std::move( lits ) };
}

struct RailProblem
{
    Cnf cnf;
    std::vector< Rail > state; // by state position
};

// Two-rail circuit encoding with the POGP's requirements attached.
RailProblem circuit_rails( const PogpInstance& p, Mode mode )
{
    const auto& ts = *p.ts;
    const auto& c = circuit_of( p ).circuit;
    const auto map = two_rail_encode( c );

    auto out = RailProblem{ map.cnf, {} };
    const auto pin = [ & ]( Rail r, bool value ) { out.cnf.add( { Lit::pos( value ? r.one : r.zero ) } ); };

    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        out.state.push_back( map.rails[ c.latches[ k ].var ] );

    for ( std::size_t k = 0; k < c.inputs.size(); ++k )
    {
        const auto r = map.rails[ c.inputs[ k ] ];
        if ( mode == Mode::fix )
            pin( r, p.i.contains( Lit::pos( ts.input[ k ] ) ) );
        else
            out.cnf.add( { Lit::pos( r.zero ), Lit::pos( r.one ) } );
    }

    if ( mode == Mode::fix )
    {
        for ( std::size_t k = 0; k < ts.state.size(); ++k )
        {
            const auto value = p.m.contains( Lit::pos( ts.state[ k ] ) );
            out.cnf.add( { Lit::neg( value ? out.state[ k ].zero : out.state[ k ].one ) } );
        }
    }
    else
    {
        auto pairs = std::vector< std::pair< Var, Rail > >{};
        for ( std::size_t k = 0; k < ts.state.size(); ++k )
            pairs.emplace_back( ts.state[ k ], out.state[ k ] );
        out.cnf.append( substitute_rails( p.frame, pairs ) );
    }

    for ( const auto l : p.d_next )
    {
        const auto k = ts.next_pos( l.var() );
        pin( map.rail( c.latches[ k ].next ), !l.negated() );
    }

    for ( const auto con : c.constraints )
        pin( map.rail( con ), true );

    out.cnf.set_num_vars( std::max( out.cnf.num_vars(), map.num_vars() ) );
    return out;
}

std::vector< Var > priority_rails( const std::vector< Lit >& order, const TransitionSystem& ts,
                                   const std::vector< Rail >& rails )
{
    auto out = std::vector< Var >{};
    for ( const auto l : order )
    {
        const auto k = ts.state_pos( l.var() );
        out.push_back( rails[ k ].zero );
        out.push_back( rails[ k ].one );
    }
    return out;
}

// All state literals of m ordered by the activity, for state vars that
// are not in m (free mode) the plain id order is appended.
std::vector< Lit > state_order( const PogpInstance& p, const Activity& a )
{
    return a.removal_order( p.m );
}

} // namespace

std::string_view to_string( Method m )
{
    for ( const auto& [ method, name ] : method_names )
        if ( method == m )
            return name;
    return "?";
}

std::string to_string( Strategy s )
{
    auto name = std::string( to_string( s.method ) );
    if ( s.mode == Mode::free )
        name += ":free";
    return name;
}

bool supports_free( Method m )
{
    switch ( m )
    {
    case Method::s01x:
    case Method::ms01x:
    case Method::ilp_cover:
    case Method::sat_cover:
    case Method::greedy_qbf:
    case Method::max_qbf: return true;
    default: return false;
    }
}

const std::vector< Method >& all_methods()
{
    static const auto methods = [] {
        auto out = std::vector< Method >{};
        for ( const auto& entry : method_names )
            out.push_back( entry.method );
        return out;
    }();
    return methods;
}

Strategy parse_strategy( std::string_view name )
{
    auto s = Strategy{};
    auto base = std::string( name );

    if ( const auto colon = base.find( ':' ); colon != std::string::npos )
    {
        const auto suffix = base.substr( colon + 1 );
        if ( suffix == "free" )
            s.mode = Mode::free;
        else if ( suffix != "fix" )
            throw unknown_strategy( "unknown mode '" + suffix + "' in strategy '" + std::string( name ) + "'" );
        base.resize( colon );
    }

    std::replace( base.begin(), base.end(), '_', '-' );

    for ( const auto& [ method, n ] : method_names )
    {
        if ( n == base )
        {
            s.method = method;
            if ( s.mode == Mode::free && !supports_free( method ) )
                throw unknown_strategy( "strategy '" + base + "' has no free variant" );
            return s;
        }
    }

    throw unknown_strategy( "unknown strategy '" + std::string( name ) + "'" );
}

std::optional< Incompatibility > check_applicable( Strategy s, const TransitionSystem& ts, const GenOptions& options )
{
    if ( s.mode == Mode::free && !supports_free( s.method ) )
        return Incompatibility{ "free mode", std::string( to_string( s.method ) ) + " has no free variant" };

    const auto needs_circuit = [ & ]() -> std::optional< Incompatibility > {
        if ( !ts.circuit || ts.reversed() )
            return Incompatibility{ "circuit origin",
                                    std::string( to_string( s.method ) ) + " simulates the circuit and needs a forward circuit system" };
        return std::nullopt;
    };

    const auto needs_right_unique = [ & ]() -> std::optional< Incompatibility > {
        if ( ts.caps.right_unique != Tri::yes )
            return Incompatibility{ "right_unique", std::string( to_string( s.method ) ) +
                                                        " needs a right-unique transition relation (right_unique is " +
                                                        std::string( to_string( ts.caps.right_unique ) ) + ")" };
        return std::nullopt;
    };

    switch ( s.method )
    {
    case Method::sim01x:
    case Method::s01x:
    case Method::ms01x: return needs_circuit();
    case Method::ms01x_igbg:
        if ( auto why = needs_circuit() )
            return why;
        return needs_right_unique();
    case Method::igbg: return needs_right_unique();
    case Method::lifting:
    case Method::lifting_ld:
    {
        if ( auto why = needs_right_unique() )
            return why;
        const auto extended = options.lifting == LiftingCall::extended ||
                              ( options.lifting == LiftingCall::automatic && ts.has_constraint() );
        if ( !extended && ts.caps.left_total != Tri::yes && !options.unsafe )
            return Incompatibility{ "left_total", "plain lifting needs a left-total transition relation (left_total is " +
                                                      std::string( to_string( ts.caps.left_total ) ) +
                                                      "); use the extended call or a constraint repair" };
        return std::nullopt;
    }
    case Method::structural:
        if ( !ts.reversed() || !ts.circuit )
            return Incompatibility{ "reversed circuit origin", "structural needs a reversed circuit system" };
        return std::nullopt;
    case Method::greedy_cover:
    case Method::gentr:
    case Method::ilp_cover:
    case Method::sat_cover:
    case Method::greedy_qbf:
    case Method::max_qbf: return std::nullopt;
    }

    return std::nullopt;
}

void Activity::reward( const TransitionSystem& ts, const Cube& before, const Cube& after )
{
    for ( const auto l : before )
    {
        if ( ts.state_pos( l.var() ) < 0 || after.contains_var( l.var() ) )
            continue;
        if ( static_cast< std::size_t >( l.var() ) >= _count.size() )
            _count.resize( static_cast< std::size_t >( l.var() ) + 1, 0 );
        ++_count[ l.var() ];
    }
}

std::uint64_t Activity::score( Var v ) const
{
    return static_cast< std::size_t >( v ) < _count.size() ? _count[ v ] : 0;
}

std::vector< Lit > Activity::removal_order( const Cube& m ) const
{
    auto lits = std::vector< Lit >( m.begin(), m.end() );
    std::stable_sort( lits.begin(), lits.end(), [ & ]( Lit a, Lit b ) {
        if ( score( a.var() ) != score( b.var() ) )
            return score( a.var() ) > score( b.var() );
        return a.var() < b.var();
    } );
    return lits;
}

std::vector< Lit > Activity::retention_order( const Cube& m ) const
{
    auto lits = std::vector< Lit >( m.begin(), m.end() );
    std::stable_sort( lits.begin(), lits.end(), [ & ]( Lit a, Lit b ) {
        if ( score( a.var() ) != score( b.var() ) )
            return score( a.var() ) < score( b.var() );
        return a.var() < b.var();
    } );
    return lits;
}

std::string_view to_string( Regime r )
{
    switch ( r )
    {
    case Regime::combined: return "combined";
    case Regime::ms01x_only: return "ms01x-only";
    case Regime::igbg_only: return "igbg-only";
    }
    return "?";
}

void Combiner::record( double igbg_seconds, double ms01x_seconds, std::size_t igbg_removed, std::size_t ms01x_removed )
{
    ++_calls;
    _igbg_time += igbg_seconds;
    _ms01x_time += ms01x_seconds;
    if ( ms01x_removed > igbg_removed )
        ++_improved;

    if ( _calls < _config.window )
        return;

    const auto share = static_cast< double >( _improved ) / static_cast< double >( _calls );
    const auto successful = share >= _config.beta;

    if ( successful && _ms01x_time <= _config.alpha * _igbg_time )
        _regime = Regime::ms01x_only;
    else if ( !successful && _ms01x_time > _config.gamma * _igbg_time )
        _regime = Regime::igbg_only;

    _calls = _improved = 0;
    _igbg_time = _ms01x_time = 0.0;
}

void Combiner::tick()
{
    if ( ++_calls < _config.window )
        return;
    _regime = Regime::combined;
    _calls = 0;
}

Cube gen_01x_sim( const PogpInstance& p, const Activity& a )
{
    const auto& ts = *p.ts;
    const auto& c = circuit_of( p ).circuit;

    auto state = std::vector< bool >( ts.state.size() );
    auto input = std::vector< bool >( ts.input.size() );
    for ( std::size_t k = 0; k < ts.state.size(); ++k )
        state[ k ] = p.m.contains( Lit::pos( ts.state[ k ] ) );
    for ( std::size_t k = 0; k < ts.input.size(); ++k )
        input[ k ] = p.i.contains( Lit::pos( ts.input[ k ] ) );

    auto observed = std::vector< Observation >{};
    for ( const auto l : p.d_next )
        observed.push_back( { static_cast< std::size_t >( ts.next_pos( l.var() ) ), !l.negated() } );

    auto order = std::vector< std::size_t >{};
    for ( const auto l : a.removal_order( p.m ) )
        order.push_back( static_cast< std::size_t >( ts.state_pos( l.var() ) ) );

    auto removed = std::vector< Var >{};
    for ( const auto k : ternary_generalize( c, state, input, observed, order ) )
        removed.push_back( ts.state[ k ] );
    return without_vars( p.m, removed );
}

Cube gen_lifting( const PogpInstance& p, const Activity& a, bool literal_dropping, bool extended, sat::Stats& stats )
{
    const auto& ts = *p.ts;
    auto solver = sat::Solver{ top_var( p ) };
    solver.add_cnf( extended ? ts.trans : ts.full_trans() );

    auto next_free = solver.num_vars() + 1;
    const auto act = Lit::pos( next_free++ );

    // ¬d′, or with a separate constraint ¬C ∨ ¬d′
    auto target = std::vector< Lit >{ ~act };
    for ( const auto l : p.d_next )
        target.push_back( ~l );
    if ( extended && ts.constraint )
    {
        const auto neg = negate_cnf( *ts.constraint, next_free );
        solver.reserve_vars( neg.next_free - 1 );
        solver.add_cnf( neg.defs );
        append( target, neg.selectors );
    }
    solver.reserve_vars( act.var() );
    solver.add_clause( target );

    const auto query = [ & ]( const Cube& c ) {
        auto assumptions = std::vector< Lit >{ act };
        append( assumptions, p.i.literals() );
        append( assumptions, a.retention_order( c ) );
        return solver.solve( assumptions );
    };

    if ( query( p.m ) != sat::Status::unsat )
        throw strategy_error( "lifting query is satisfiable" );

    auto c = core_part( solver, p.m );

    for ( auto changed = literal_dropping; changed; )
    {
        changed = false;
        for ( const auto l : a.removal_order( c ) )
        {
            if ( !c.contains( l ) )
                continue;
            const auto trial = c.without( l );
            if ( query( trial ) == sat::Status::unsat )
            {
                c = core_part( solver, trial );
                changed = true;
            }
        }
    }

    stats += solver.stats();
    return c;
}

Cube gen_igbg( const PogpInstance& p, sat::Stats& stats )
{
    const auto& ts = *p.ts;
    auto solver = sat::Solver{ top_var( p ) };
    solver.add_cnf( ts.trans );

    auto assignment = std::vector< Lit >( p.m.begin(), p.m.end() );
    append( assignment, p.i.literals() );

    auto targets = std::vector< Var >{};
    for ( const auto l : p.d_next )
        targets.push_back( l.var() );
    if ( ts.constraint )
        for ( const auto& c : ts.constraint->clauses() )
            for ( const auto l : c )
                targets.push_back( l.var() );

    auto view = sat::ImplicationView{};
    try
    {
        view = solver.propagate_with( assignment, targets );
    }
    catch ( const sat::incomplete_propagation& e )
    {
        throw strategy_error( std::string( "transition relation is not right-unique: " ) + e.what() );
    }
    catch ( const sat::inconsistent_assignment& e )
    {
        throw strategy_error( std::string( "m ∧ i is not a transition: " ) + e.what() );
    }

    for ( const auto l : p.d_next )
        if ( !view.is_true( l ) )
            throw strategy_error( "m ∧ i does not imply d′" );

    auto seen = std::vector< char >( static_cast< std::size_t >( solver.num_vars() ) + 1, 0 );
    auto stack = targets;
    auto kept = std::vector< Lit >{};

    while ( !stack.empty() )
    {
        const auto v = stack.back();
        stack.pop_back();
        if ( seen[ v ] )
            continue;
        seen[ v ] = 1;

        const auto reason = view.reason[ v ];
        if ( reason == sat::ImplicationView::decision )
        {
            if ( ts.state_pos( v ) >= 0 )
                kept.emplace_back( v, view.value[ v ] < 0 );
            continue;
        }

        for ( const auto l : solver.clause_literals( reason ) )
            if ( l.var() != v )
                stack.push_back( l.var() );
    }

    stats += solver.stats();
    return Cube{ std::move( kept ) };
}

Cube gen_s01x( const PogpInstance& p, Mode mode, const Activity& a, sat::Stats& stats )
{
    const auto rails = circuit_rails( p, mode );
    auto solver = sat::Solver{ rails.cnf.num_vars() };
    solver.add_cnf( rails.cnf );
    solver.set_polarity( sat::Polarity::false_first );
    solver.set_priority( priority_rails( state_order( p, a ), *p.ts, rails.state ) );

    if ( solver.solve() != sat::Status::sat )
        throw strategy_error( "two-rail instance is unsatisfiable" );

    stats += solver.stats();
    return cube_from_rails( *p.ts, rails.state, solver.model() );
}

Cube gen_ms01x( const PogpInstance& p, Mode mode, const std::optional< Cube >& warm_start, sat::Stats& stats )
{
    const auto& ts = *p.ts;
    auto rails = circuit_rails( p, mode );
    auto problem = opt::MaxSatProblem{ std::move( rails.cnf ), {} };
    auto next_free = problem.hard.num_vars() + 1;

    for ( std::size_t k = 0; k < ts.state.size(); ++k )
    {
        const auto t = Lit::pos( next_free++ );
        const auto r = rails.state[ k ];
        problem.hard.add( { ~t, Lit::neg( r.zero ) } );
        problem.hard.add( { ~t, Lit::neg( r.one ) } );
        problem.hard.add( { t, Lit::pos( r.zero ), Lit::pos( r.one ) } );
        if ( warm_start && !warm_start->contains_var( ts.state[ k ] ) )
            problem.hard.add( { t } );
        problem.soft.push_back( t );
    }

    try
    {
        const auto result = opt::max_sat( problem );
        stats += result.stats;
        return cube_from_rails( ts, rails.state, result.model );
    }
    catch ( const opt::no_solution& )
    {
        throw strategy_error( "two-rail instance is unsatisfiable" );
    }
}

Cube gen_greedy_cover( const PogpInstance& p, const Activity& a )
{
    auto rows = cover_rows( p );
    const auto preference = a.retention_order( p.m );
    auto kept = std::vector< Lit >{};

    while ( !rows.empty() )
    {
        auto best = Lit{};
        auto best_count = std::size_t{ 0 };
        for ( const auto l : preference )
        {
            const auto count = static_cast< std::size_t >(
                std::count_if( rows.begin(), rows.end(), [ & ]( const Clause& c ) { return c.contains( l ); } ) );
            if ( count > best_count )
            {
                best_count = count;
                best = l;
            }
        }

        kept.push_back( best );
        std::erase_if( rows, [ & ]( const Clause& c ) { return c.contains( best ); } );
    }

    return Cube{ std::move( kept ) };
}

Cube gen_gentr( const PogpInstance& p, const Activity& a, sat::Stats& stats )
{
    const auto neg = negate_cnf( p.ts->full_trans(), top_var( p ) + 1 );
    auto solver = sat::Solver{ neg.next_free - 1 };
    solver.add_cnf( neg.defs );
    solver.add_clause( neg.selectors );

    const auto model = full_model( p );
    auto assumptions = std::vector< Lit >{};
    append( assumptions, non_state_part( p, model ).literals() );
    append( assumptions, a.retention_order( p.m ) );

    if ( solver.solve( assumptions ) != sat::Status::unsat )
        throw strategy_error( "m ∧ i ∧ t′ does not satisfy T" );

    stats += solver.stats();
    return core_part( solver, p.m );
}

Cube gen_ilp_cover( const PogpInstance& p, Mode mode, const Activity& a, sat::Stats& stats )
{
    const auto& ts = *p.ts;

    if ( mode == Mode::fix )
    {
        const auto rows = cover_rows( p );
        const auto candidates = a.retention_order( p.m );
        try
        {
            return Cube{ opt::min_cover( rows, candidates ) };
        }
        catch ( const opt::no_solution& e )
        {
            throw strategy_error( e.what() );
        }
    }

    // Binate covering of ¬d ∧ R ∧ T ∧ d′ as partial MaxSAT over rails.
    const auto f = free_matrix( p );
    auto vars = std::set< Var >( ts.state.begin(), ts.state.end() );
    for ( const auto& c : f.clauses() )
        for ( const auto l : c )
            vars.insert( l.var() );

    const auto var_list = std::vector< Var >( vars.begin(), vars.end() );
    const auto sub = rail_substitute( f, var_list, f.num_vars() + 1 );

    auto problem = opt::MaxSatProblem{ sub.cnf, {} };
    auto next_free = sub.next_free;
    auto rails = std::vector< Rail >{};

    for ( const auto v : ts.state )
    {
        const auto r = sub.rail_of( v );
        rails.push_back( r );
        const auto t = Lit::pos( next_free++ );
        problem.hard.add( { ~t, Lit::neg( r.zero ) } );
        problem.hard.add( { ~t, Lit::neg( r.one ) } );
        problem.soft.push_back( t );
    }

    try
    {
        const auto result = opt::max_sat( problem );
        stats += result.stats;
        return cube_from_rails( ts, rails, result.model );
    }
    catch ( const opt::no_solution& )
    {
        throw strategy_error( "covering instance is infeasible" );
    }
}

Cube gen_sat_cover( const PogpInstance& p, Mode mode, const Activity& a, sat::Stats& stats )
{
    const auto& ts = *p.ts;
    auto sub = rail_substitute( ts.full_trans(), ts.state, top_var( p ) + 1 );
    auto cnf = sub.cnf;

    auto rails = std::vector< Rail >{};
    for ( const auto v : ts.state )
        rails.push_back( sub.rail_of( v ) );

    if ( mode == Mode::fix )
    {
        for ( std::size_t k = 0; k < ts.state.size(); ++k )
        {
            const auto value = p.m.contains( Lit::pos( ts.state[ k ] ) );
            cnf.add( { Lit::neg( value ? rails[ k ].zero : rails[ k ].one ) } );
        }
    }
    else
    {
        cnf.append( substitute_rails( p.frame, sub.rails ) );
    }

    for ( const auto l : p.d_next )
        cnf.add( { l } );

    auto solver = sat::Solver{ std::max( cnf.num_vars(), sub.next_free - 1 ) };
    solver.add_cnf( cnf );
    solver.set_polarity( sat::Polarity::false_first );
    solver.set_priority( priority_rails( state_order( p, a ), ts, rails ) );

    if ( solver.solve() != sat::Status::sat )
        throw strategy_error( "rail cover instance is unsatisfiable" );

    stats += solver.stats();
    return cube_from_rails( ts, rails, solver.model() );
}

Cube gen_greedy_qbf( const PogpInstance& p, Mode mode, const Activity& a )
{
    const auto& ts = *p.ts;
    auto universal = std::vector< Var >{};
    auto result = p.m;

    auto base = mode == Mode::fix ? ts.full_trans() : free_matrix( p );
    if ( mode == Mode::fix )
        for ( const auto l : p.d_next )
            base.add( { l } );
    base.set_num_vars( std::max( base.num_vars(), top_var( p ) ) );

    for ( const auto l : a.removal_order( p.m ) )
    {
        auto trial = universal;
        trial.push_back( l.var() );

        auto problem = opt::Qbf2Problem{};
        problem.universal = trial;
        problem.matrix = base;

        for ( const auto v : ts.state )
        {
            if ( std::find( trial.begin(), trial.end(), v ) != trial.end() )
                continue;
            if ( mode == Mode::fix )
                problem.matrix.add( { *p.m.find_var( v ) } );
            else
                problem.outer.push_back( v );
        }

        const auto r = opt::qbf2_solve( problem );
        if ( !r.valid )
            continue;

        universal = std::move( trial );
        if ( mode == Mode::fix )
        {
            result = without_vars( p.m, universal );
        }
        else
        {
            auto lits = std::vector< Lit >{};
            for ( const auto v : problem.outer )
                lits.emplace_back( v, !r.witness[ v ] );
            result = Cube{ std::move( lits ) };
        }
    }

    return result;
}

Cube gen_max_qbf( const PogpInstance& p, Mode mode )
{
    const auto& ts = *p.ts;
    auto problem = opt::MaxQbfProblem{};
    auto& q = problem.qbf;

    q.matrix = mode == Mode::fix ? ts.full_trans() : free_matrix( p );
    if ( mode == Mode::fix )
        for ( const auto l : p.d_next )
            q.matrix.add( { l } );

    auto next_free = std::max( q.matrix.num_vars(), top_var( p ) ) + 1;
    auto selectors = std::vector< Var >{};
    auto chosen = std::vector< Var >{}; // free mode: the cube's values

    for ( const auto s : ts.state )
    {
        const auto s_all = next_free++;
        const auto u = next_free++;
        selectors.push_back( u );
        q.universal.push_back( s_all );
        q.outer.push_back( u );
        problem.soft.push_back( Lit::pos( u ) );

        // u → (s ↔ s∀)
        q.matrix.add( { Lit::neg( u ), Lit::neg( s_all ), Lit::pos( s ) } );
        q.matrix.add( { Lit::neg( u ), Lit::pos( s_all ), Lit::neg( s ) } );

        if ( mode == Mode::fix )
        {
            // ¬u → s = m(s)
            q.matrix.add( { Lit::pos( u ), *p.m.find_var( s ) } );
        }
        else
        {
            // ¬u → (s ↔ s∃)
            const auto s_ex = next_free++;
            chosen.push_back( s_ex );
            q.outer.push_back( s_ex );
            q.matrix.add( { Lit::pos( u ), Lit::neg( s_ex ), Lit::pos( s ) } );
            q.matrix.add( { Lit::pos( u ), Lit::pos( s_ex ), Lit::neg( s ) } );
        }
    }
    q.matrix.set_num_vars( next_free - 1 );

    auto result = opt::MaxQbfResult{};
    try
    {
        result = opt::max_qbf( problem );
    }
    catch ( const opt::invalid_base& )
    {
        throw strategy_error( "m is not a proof obligation for d′" );
    }

    auto lits = std::vector< Lit >{};
    for ( std::size_t k = 0; k < ts.state.size(); ++k )
    {
        if ( result.witness[ selectors[ k ] ] )
            continue;
        if ( mode == Mode::fix )
            lits.push_back( *p.m.find_var( ts.state[ k ] ) );
        else
            lits.emplace_back( ts.state[ k ], !result.witness[ chosen[ k ] ] );
    }
    return Cube{ std::move( lits ) };
}

namespace
{

struct Support
{
    std::vector< char > latches;
    std::vector< char > inputs;

    bool overlaps( const Support& o ) const
    {
        for ( std::size_t k = 0; k < latches.size(); ++k )
            if ( latches[ k ] && o.latches[ k ] )
                return true;
        for ( std::size_t k = 0; k < inputs.size(); ++k )
            if ( inputs[ k ] && o.inputs[ k ] )
                return true;
        return false;
    }
};

Support support_of( const Circuit& c, AigLit root )
{
    auto s = Support{ std::vector< char >( c.latches.size(), 0 ), std::vector< char >( c.inputs.size(), 0 ) };
    const auto gates = c.gate_index();

    auto latch_of = std::vector< int >( c.max_var + 1, -1 );
    auto input_of = std::vector< int >( c.max_var + 1, -1 );
    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        latch_of[ c.latches[ k ].var ] = static_cast< int >( k );
    for ( std::size_t k = 0; k < c.inputs.size(); ++k )
        input_of[ c.inputs[ k ] ] = static_cast< int >( k );

    auto seen = std::vector< char >( c.max_var + 1, 0 );
    auto stack = std::vector< std::uint32_t >{ root.var() };

    while ( !stack.empty() )
    {
        const auto v = stack.back();
        stack.pop_back();
        if ( v == 0 || seen[ v ] )
            continue;
        seen[ v ] = 1;

        if ( latch_of[ v ] >= 0 )
            s.latches[ latch_of[ v ] ] = 1;
        else if ( input_of[ v ] >= 0 )
            s.inputs[ input_of[ v ] ] = 1;
        else if ( gates[ v ] >= 0 )
        {
            const auto& g = c.gates[ gates[ v ] ];
            stack.push_back( g.in0.var() );
            stack.push_back( g.in1.var() );
        }
    }

    return s;
}

} // namespace

Cube gen_structural( const PogpInstance& p )
{
    const auto& ts = *p.ts;
    const auto& link = circuit_of( p );
    const auto& c = link.circuit;

    auto supports = std::vector< Support >{};
    for ( const auto& latch : c.latches )
        supports.push_back( support_of( c, latch.next ) );

    // latches whose (reversed) next-state copy is constrained by d′
    auto target = Support{ std::vector< char >( c.latches.size(), 0 ), std::vector< char >( c.inputs.size(), 0 ) };
    for ( const auto l : p.d_next )
        target.latches[ ts.next_pos( l.var() ) ] = 1;

    auto solver = sat::Solver{ link.encoding.cnf.num_vars() };
    solver.add_cnf( link.encoding.cnf );
    const auto non_constant = [ & ]( AigLit f ) {
        if ( f.is_constant() )
            return false;
        const auto l = link.encoding.lit( f );
        return solver.solve( { l } ) == sat::Status::sat && solver.solve( { ~l } ) == sat::Status::sat;
    };

    auto removed = std::vector< Var >{};
    for ( std::size_t j = 0; j < c.latches.size(); ++j )
    {
        if ( supports[ j ].overlaps( target ) )
            continue;

        auto disjoint = true;
        for ( std::size_t k = 0; k < c.latches.size() && disjoint; ++k )
            if ( k != j && supports[ j ].overlaps( supports[ k ] ) )
                disjoint = false;

        if ( disjoint && non_constant( c.latches[ j ].next ) )
            removed.push_back( ts.state[ j ] );
    }

    return without_vars( p.m, removed );
}

Cube combine_ms01x_igbg( const PogpInstance& p, Combiner& combiner, sat::Stats& stats )
{
    using clock = std::chrono::steady_clock;

    switch ( combiner.regime() )
    {
    case Regime::ms01x_only:
        combiner.tick();
        return gen_ms01x( p, Mode::fix, std::nullopt, stats );
    case Regime::igbg_only:
        combiner.tick();
        return gen_igbg( p, stats );
    case Regime::combined: break;
    }

    const auto t0 = clock::now();
    const auto warm = gen_igbg( p, stats );
    const auto t1 = clock::now();
    const auto best = gen_ms01x( p, Mode::fix, warm, stats );
    const auto t2 = clock::now();

    const auto seconds = []( auto d ) { return std::chrono::duration< double >( d ).count(); };
    combiner.record( seconds( t1 - t0 ), seconds( t2 - t1 ), p.m.size() - warm.size(), p.m.size() - best.size() );
    return best;
}

GenResult generalize( Strategy s, const PogpInstance& p, GenContext& ctx )
{
    if ( auto why = check_applicable( s, *p.ts, ctx.options ) )
        throw inapplicable_strategy( std::move( *why ) );

    const auto start = std::chrono::steady_clock::now();
    auto result = GenResult{};
    result.strategy = to_string( s );

    const auto& a = ctx.activity;
    const auto extended = ctx.options.lifting == LiftingCall::extended ||
                          ( ctx.options.lifting == LiftingCall::automatic && p.ts->has_constraint() );

    switch ( s.method )
    {
    case Method::sim01x: result.cube = gen_01x_sim( p, a ); break;
    case Method::lifting: result.cube = gen_lifting( p, a, false, extended, result.stats ); break;
    case Method::lifting_ld: result.cube = gen_lifting( p, a, true, extended, result.stats ); break;
    case Method::igbg: result.cube = gen_igbg( p, result.stats ); break;
    case Method::s01x: result.cube = gen_s01x( p, s.mode, a, result.stats ); break;
    case Method::ms01x: result.cube = gen_ms01x( p, s.mode, std::nullopt, result.stats ); break;
    case Method::ms01x_igbg: result.cube = combine_ms01x_igbg( p, ctx.combiner, result.stats ); break;
    case Method::greedy_cover: result.cube = gen_greedy_cover( p, a ); break;
    case Method::gentr: result.cube = gen_gentr( p, a, result.stats ); break;
    case Method::ilp_cover: result.cube = gen_ilp_cover( p, s.mode, a, result.stats ); break;
    case Method::sat_cover: result.cube = gen_sat_cover( p, s.mode, a, result.stats ); break;
    case Method::greedy_qbf: result.cube = gen_greedy_qbf( p, s.mode, a ); break;
    case Method::max_qbf: result.cube = gen_max_qbf( p, s.mode ); break;
    case Method::structural: result.cube = gen_structural( p ); break;
    }

    result.time = std::chrono::steady_clock::now() - start;
    result.removed = p.ts->state.size() - result.cube.size();
    ctx.activity.reward( *p.ts, p.m, result.cube );
    return result;
}

} // namespace pogen
