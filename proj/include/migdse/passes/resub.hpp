/*!
  \file resub.hpp
  \brief Window-based resubstitution

  For every gate the pass builds a reconvergence window, simulates exact truth
  tables over the window leaves, and looks for an existing divisor — a window
  node with a strictly smaller id — whose window function equals the gate's
  function or its complement. Equality over a complete cut proves global
  equivalence, and replacing a gate by an already existing signal strictly
  reduces the reachable node count, so every verified match is taken. All
  windows are computed on the input network; substitutions compose during the
  final rebuild.
*/

#pragma once

#include <algorithm>
#include <vector>

#include "../mig.hpp"
#include "../window.hpp"

namespace migdse
{

/*! \brief One resubstitution sweep */
inline mig pass_resub( mig const& m, uint32_t max_window_leaves, uint32_t max_divisors )
{
  std::vector<signal> sub( m.size() ); /* lit 0 means no substitution */
  auto mark = m.reachable();

  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
  {
    if ( !mark[n] )
      continue;
    auto leaves = reconvergence_cut( m, n, max_window_leaves );
    auto interior = collect_window( m, { n }, leaves );

    /* divisor candidates: window nodes below n, ascending, capped */
    std::vector<uint32_t> candidates;
    for ( uint32_t l : leaves )
      candidates.push_back( l );
    for ( uint32_t i : interior )
      if ( i != n )
        candidates.push_back( i );
    std::sort( candidates.begin(), candidates.end() );
    if ( candidates.size() > max_divisors )
      candidates.resize( max_divisors );
    if ( candidates.empty() )
      continue;

    window_tables tables( m, leaves, interior );
    auto const target = tables.of_node( n );
    for ( uint32_t d : candidates )
    {
      auto const& t = tables.of_node( d );
      if ( t == target )
      {
        sub[n] = signal{ d, false };
        break;
      }
      if ( t.is_complement_of( target ) )
      {
        sub[n] = signal{ d, true };
        break;
      }
    }
  }

  /* rebuild with substitutions composed transitively (targets have smaller ids) */
  mig dest( m.num_pis() );
  dest.pi_names() = m.pi_names();
  dest.po_names() = m.po_names();

  std::vector<signal> map( m.size() );
  map[0] = const0;
  for ( uint32_t i = 0; i < m.num_pis(); ++i )
    map[1 + i] = dest.pi( i );

  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
  {
    if ( !mark[n] )
      continue;
    if ( sub[n].lit != 0 )
    {
      map[n] = map[sub[n].node()] ^ sub[n].complemented();
      continue;
    }
    auto const& f = m.fanins( n );
    map[n] = dest.make_maj( map[f[0].node()] ^ f[0].complemented(),
                            map[f[1].node()] ^ f[1].complemented(),
                            map[f[2].node()] ^ f[2].complemented() );
  }

  for ( uint32_t k = 0; k < m.num_pos(); ++k )
  {
    auto po = m.po( k );
    dest.create_po( map[po.node()] ^ po.complemented() );
  }
  return cleanup_dangling( dest );
}

} // namespace migdse
