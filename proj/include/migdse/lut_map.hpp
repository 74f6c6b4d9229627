/*!
  \file lut_map.hpp
  \brief Structural 6-input LUT count estimation via priority cuts

  Classic area-oriented k-feasible mapping: every node keeps a small, sorted
  set of cuts (at most 8, each with at most 6 leaves), ranked by integer area
  flow. A second, reverse-topological sweep from the outputs greedily selects
  each required node's best cut and requires its leaves in turn; the number of
  selected cuts is the LUT6 estimate. The procedure is deterministic: ties are
  broken by leaf count, then by lexicographic leaf order.

  Area flow is kept in integers (scaled by 1000) so results are bit-stable
  across platforms. A cut's flow is the scale constant (its own LUT) plus the
  flow share of each leaf; a gate leaf's share is clamped to at least 1, so a
  cut whose leaves are all primary inputs is always strictly cheaper than any
  cut routed through intermediate gates. In particular an output cone with at
  most six primary inputs always maps to exactly one LUT.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mig.hpp"
#include "window.hpp"

namespace migdse
{

inline constexpr uint32_t lut_cut_limit = 8;   //!< max cuts stored per node
inline constexpr uint32_t lut_cut_size = 6;    //!< max leaves per cut
inline constexpr uint64_t lut_flow_scale = 1000;

namespace detail
{

struct lut_cut
{
  std::vector<uint32_t> leaves; //!< sorted ascending, never contains the constant
  uint64_t flow{ 0 };
};

inline bool cut_rank_less( lut_cut const& a, lut_cut const& b )
{
  if ( a.flow != b.flow )
    return a.flow < b.flow;
  if ( a.leaves.size() != b.leaves.size() )
    return a.leaves.size() < b.leaves.size();
  return a.leaves < b.leaves;
}

/*! \brief Sorted union of up to three leaf sets; empty result on overflow */
inline bool cut_union( std::vector<uint32_t> const& a, std::vector<uint32_t> const& b,
                       std::vector<uint32_t> const& c, std::vector<uint32_t>& out )
{
  out.clear();
  std::merge( a.begin(), a.end(), b.begin(), b.end(), std::back_inserter( out ) );
  std::vector<uint32_t> tmp;
  std::merge( out.begin(), out.end(), c.begin(), c.end(), std::back_inserter( tmp ) );
  tmp.erase( std::unique( tmp.begin(), tmp.end() ), tmp.end() );
  if ( tmp.size() > lut_cut_size )
    return false;
  out = std::move( tmp );
  return true;
}

} // namespace detail

/*! \brief Number of 6-input LUTs in a greedy area-oriented cover */
inline uint64_t map_lut6( mig const& m )
{
  if ( m.num_gates() == 0 )
    return 0;

  auto const refs = fanout_counts( m );
  auto const reach = m.reachable();

  /* per-node kept cuts (for merging at fanouts) and the chosen cover cut */
  std::vector<std::vector<detail::lut_cut>> cuts( m.size() );
  std::vector<std::vector<uint32_t>> cover_cut( m.size() );
  std::vector<uint64_t> flow_best( m.size(), 0 );

  cuts[0].push_back( { {}, 0 } ); /* the constant contributes no leaves */
  for ( uint32_t n = 1; n <= m.num_pis(); ++n )
  {
    cuts[n].push_back( { { n }, 0 } );
  }

  std::vector<detail::lut_cut> cand;
  std::vector<uint32_t> merged;
  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
  {
    if ( !reach[n] )
      continue;
    auto const& f = m.fanins( n );
    cand.clear();
    for ( auto const& c0 : cuts[f[0].node()] )
    {
      for ( auto const& c1 : cuts[f[1].node()] )
      {
        for ( auto const& c2 : cuts[f[2].node()] )
        {
          if ( !detail::cut_union( c0.leaves, c1.leaves, c2.leaves, merged ) )
            continue;
          uint64_t flow = lut_flow_scale;
          for ( auto leaf : merged )
            flow += flow_best[leaf];
          /* skip duplicates (different fanin-cut combos can merge equally) */
          bool dup = false;
          for ( auto const& c : cand )
            if ( c.leaves == merged )
            {
              dup = true;
              break;
            }
          if ( !dup )
            cand.push_back( { merged, flow } );
        }
      }
    }
    std::sort( cand.begin(), cand.end(), detail::cut_rank_less );
    if ( cand.size() > lut_cut_limit - 1 )
      cand.resize( lut_cut_limit - 1 );

    cover_cut[n] = cand.front().leaves;
    uint64_t const share = cand.front().flow / std::max<uint32_t>( 1, refs[n] );
    flow_best[n] = std::max<uint64_t>( 1, share );

    cuts[n] = std::move( cand );
    cuts[n].push_back( { { n }, flow_best[n] } ); /* unit cut, for fanout merging */
  }

  /* reverse-topological greedy cover from the outputs */
  std::vector<bool> needed( m.size(), false );
  for ( auto const& po : m.pos() )
    if ( m.is_gate( po.node() ) )
      needed[po.node()] = true;
  uint64_t count = 0;
  for ( uint32_t n = m.size(); n-- > m.first_gate(); )
  {
    if ( !needed[n] )
      continue;
    ++count;
    for ( auto leaf : cover_cut[n] )
      if ( m.is_gate( leaf ) )
        needed[leaf] = true;
  }
  return count;
}

} // namespace migdse
