/*!
  \file refactor.hpp
  \brief Cone collapsing and Shannon resynthesis

  Roots are visited top-down; each maximal fanout-free cone with few enough
  inputs is collapsed to an exact truth table and resynthesized by top-variable
  Shannon decomposition. The decomposition is fixed: recurse on the highest
  non-vacuous variable x with cofactor structures hi and lo and emit
  OR(AND(x, hi), AND(!x, lo)), degenerating to a single AND or OR whenever a
  cofactor is constant; identical subfunctions are shared through a truth-table
  memo. A cone is replaced when the new structure is strictly smaller, or not
  larger when area increase is allowed; replaced interiors are excluded from
  later cones. The final rebuild shares structure across cones via hashing.
*/

#pragma once

#include <unordered_map>
#include <vector>

#include "../mig.hpp"
#include "../truth_table.hpp"
#include "../window.hpp"

namespace migdse
{

namespace detail
{

/*! \brief Interior of the maximal fanout-free cone at `root` (root included), ascending
 *
 * `counts` are reference counts over the whole network; they are temporarily
 * dereferenced during the walk and restored before returning.
 */
inline std::vector<uint32_t> mffc_cone( mig const& m, uint32_t root, std::vector<uint32_t>& counts )
{
  std::vector<uint32_t> cone;
  auto deref = [&]( auto&& self, uint32_t n ) -> void {
    cone.push_back( n );
    for ( auto const& f : m.fanins( n ) )
    {
      uint32_t c = f.node();
      if ( m.is_gate( c ) && --counts[c] == 0 )
        self( self, c );
    }
  };
  deref( deref, root );
  for ( uint32_t n : cone )
    for ( auto const& f : m.fanins( n ) )
      if ( m.is_gate( f.node() ) )
        ++counts[f.node()];
  std::sort( cone.begin(), cone.end() );
  return cone;
}

struct table_hasher
{
  size_t operator()( truth_table const& t ) const { return static_cast<size_t>( t.hash() ); }
};

/*! \brief Canonical Shannon decomposition of `tt` over `vars` into `dest` */
inline signal shannon_build( mig& dest, truth_table const& tt, std::vector<signal> const& vars,
                             std::unordered_map<truth_table, signal, table_hasher>& memo )
{
  if ( tt.is_const0() )
    return const0;
  if ( tt.is_const1() )
    return const1;
  if ( auto it = memo.find( tt ); it != memo.end() )
    return it->second;

  uint32_t var = 0;
  for ( uint32_t v = tt.num_vars(); v-- > 0; )
    if ( !tt.is_vacuous_in( v ) )
    {
      var = v;
      break;
    }
  auto const shi = shannon_build( dest, tt.cofactor( var, true ), vars, memo );
  auto const slo = shannon_build( dest, tt.cofactor( var, false ), vars, memo );
  signal const x = vars[var];

  signal r;
  if ( shi == slo )
    r = shi;
  else if ( slo == const0 )
    r = dest.make_and( x, shi );
  else if ( slo == const1 )
    r = dest.make_or( !x, shi );
  else if ( shi == const0 )
    r = dest.make_and( !x, slo );
  else if ( shi == const1 )
    r = dest.make_or( x, slo );
  else
    r = dest.make_or( dest.make_and( x, shi ), dest.make_and( !x, slo ) );
  memo.emplace( tt, r );
  return r;
}

} // namespace detail

/*! \brief One refactoring sweep */
inline mig pass_refactor( mig const& m, uint32_t max_cone_inputs, bool allow_area_increase )
{
  auto counts = fanout_counts( m );
  auto mark = m.reachable();
  std::vector<bool> dead( m.size(), false );

  struct plan_t
  {
    std::vector<uint32_t> inputs;
    mig scratch; /* single PO holding the root function over scratch PIs */
  };
  std::unordered_map<uint32_t, plan_t> plans;

  for ( uint32_t n = m.size(); n-- > m.first_gate(); )
  {
    if ( !mark[n] || dead[n] )
      continue;
    auto cone = detail::mffc_cone( m, n, counts );
    if ( cone.size() < 2 )
      continue;

    std::vector<uint32_t> inputs;
    {
      std::vector<bool> in_cone( m.size(), false );
      for ( uint32_t c : cone )
        in_cone[c] = true;
      for ( uint32_t c : cone )
        for ( auto const& f : m.fanins( c ) )
        {
          uint32_t s = f.node();
          if ( !m.is_constant( s ) && !in_cone[s] &&
               std::find( inputs.begin(), inputs.end(), s ) == inputs.end() )
            inputs.push_back( s );
        }
      std::sort( inputs.begin(), inputs.end() );
    }
    if ( inputs.size() > max_cone_inputs )
      continue;

    window_tables tables( m, inputs, cone );
    auto const tt = tables.of_node( n );

    plan_t plan;
    plan.inputs = inputs;
    plan.scratch = mig( static_cast<uint32_t>( inputs.size() ) );
    std::vector<signal> vars;
    for ( uint32_t i = 0; i < inputs.size(); ++i )
      vars.push_back( plan.scratch.pi( i ) );
    std::unordered_map<truth_table, signal, detail::table_hasher> memo;
    plan.scratch.create_po( detail::shannon_build( plan.scratch, tt, vars, memo ) );

    uint32_t const cost_new = plan.scratch.node_count();
    uint32_t const cost_old = static_cast<uint32_t>( cone.size() );
    if ( cost_new < cost_old || ( allow_area_increase && cost_new <= cost_old ) )
    {
      for ( uint32_t c : cone )
        if ( c != n )
        {
          dead[c] = true;
          plans.erase( c );
        }
      plans.emplace( n, std::move( plan ) );
    }
  }

  mig dest( m.num_pis() );
  dest.pi_names() = m.pi_names();
  dest.po_names() = m.po_names();

  std::vector<signal> map( m.size() );
  map[0] = const0;
  for ( uint32_t i = 0; i < m.num_pis(); ++i )
    map[1 + i] = dest.pi( i );

  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
  {
    if ( !mark[n] || dead[n] )
      continue;
    if ( auto it = plans.find( n ); it != plans.end() )
    {
      auto const& plan = it->second;
      auto const& s = plan.scratch;
      std::vector<signal> smap( s.size() );
      smap[0] = const0;
      for ( uint32_t i = 0; i < s.num_pis(); ++i )
        smap[1 + i] = map[plan.inputs[i]];
      for ( uint32_t g = s.first_gate(); g < s.size(); ++g )
      {
        auto const& f = s.fanins( g );
        smap[g] = dest.make_maj( smap[f[0].node()] ^ f[0].complemented(),
                                 smap[f[1].node()] ^ f[1].complemented(),
                                 smap[f[2].node()] ^ f[2].complemented() );
      }
      auto po = s.po( 0 );
      map[n] = smap[po.node()] ^ po.complemented();
    }
    else
    {
      auto const& f = m.fanins( n );
      map[n] = dest.make_maj( map[f[0].node()] ^ f[0].complemented(),
                              map[f[1].node()] ^ f[1].complemented(),
                              map[f[2].node()] ^ f[2].complemented() );
    }
  }

  for ( uint32_t k = 0; k < m.num_pos(); ++k )
  {
    auto po = m.po( k );
    dest.create_po( map[po.node()] ^ po.complemented() );
  }

  auto result = cleanup_dangling( dest );
  if ( !allow_area_increase && result.node_count() > m.node_count() )
    return m;
  return result;
}

} // namespace migdse
