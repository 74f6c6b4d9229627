/*!
  \file balance.hpp
  \brief Depth reduction through re-association

  One topological sweep; at every gate the plain copy competes against all
  one-step re-associations and the variant with the lowest resulting level
  wins, accepted only when strictly lower than the copy. Because mapped fanin
  levels never exceed their originals, the sweep can only shrink depth. Node
  count is controlled by a terminal guard: strict mode tolerates no growth,
  relaxed mode up to 2 percent.
*/

#pragma once

#include <cmath>
#include <vector>

#include "../mig.hpp"
#include "detail.hpp"

namespace migdse
{

enum class balance_mode
{
  strict,
  relaxed
};

/*! \brief One balancing sweep; depth never increases */
inline mig pass_balance( mig const& m, balance_mode mode )
{
  mig dest( m.num_pis() );
  dest.pi_names() = m.pi_names();
  dest.po_names() = m.po_names();

  std::vector<signal> map( m.size() );
  map[0] = const0;
  for ( uint32_t i = 0; i < m.num_pis(); ++i )
    map[1 + i] = dest.pi( i );

  auto level_of = [&]( signal s ) -> uint32_t {
    return dest.is_gate( s.node() ) ? dest.level( s.node() ) : 0;
  };

  auto mark = m.reachable();
  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
  {
    if ( !mark[n] )
      continue;
    auto const& f = m.fanins( n );
    std::array<signal, 3> ops;
    for ( int i = 0; i < 3; ++i )
      ops[i] = map[f[i].node()] ^ f[i].complemented();

    auto variants = detail::assoc_variants( dest, ops );

    auto const wm = dest.mark();
    auto eval = [&]( size_t idx, uint32_t& level, uint32_t& cost ) {
      signal s = idx == 0 ? dest.make_maj( ops[0], ops[1], ops[2] )
                          : detail::build_variant( dest, variants[idx - 1] );
      level = level_of( s );
      cost = dest.size() - wm;
      dest.rollback( wm );
    };

    uint32_t default_level, default_cost;
    eval( 0, default_level, default_cost );
    size_t chosen = 0;
    uint32_t chosen_level = default_level, chosen_cost = default_cost;
    for ( size_t idx = 1; idx <= variants.size(); ++idx )
    {
      uint32_t level, cost;
      eval( idx, level, cost );
      if ( level < chosen_level || ( level == chosen_level && chosen != 0 && cost < chosen_cost ) )
      {
        chosen = idx;
        chosen_level = level;
        chosen_cost = cost;
      }
    }
    if ( chosen != 0 && chosen_level >= default_level )
      chosen = 0; /* only strictly level-reducing moves are taken */

    map[n] = chosen == 0 ? dest.make_maj( ops[0], ops[1], ops[2] )
                         : detail::build_variant( dest, variants[chosen - 1] );
  }

  for ( uint32_t k = 0; k < m.num_pos(); ++k )
  {
    auto po = m.po( k );
    dest.create_po( map[po.node()] ^ po.complemented() );
  }

  auto result = cleanup_dangling( dest );
  uint64_t const budget = mode == balance_mode::strict
                              ? m.node_count()
                              : static_cast<uint64_t>(
                                    std::ceil( 1.02 * static_cast<double>( m.node_count() ) ) );
  if ( result.depth() > m.depth() || result.node_count() > budget )
    return m;
  return result;
}

} // namespace migdse
