/*!
  \file window.hpp
  \brief Reconvergence-driven cuts and window truth-table simulation

  A window is a set of interior gates between one or more roots and a leaf
  cut. Cut construction starts from the root fanins and greedily expands the
  leaf whose replacement by its own fanins adds the fewest new leaves, which
  draws reconvergent regions into the window. The construction maintains the
  invariant that every interior fanin is a leaf, another interior node, or a
  constant, so truth tables computed over the leaf variables are exact: two
  interior signals with equal window functions are globally equivalent.
*/

#pragma once

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "common.hpp"
#include "mig.hpp"
#include "truth_table.hpp"

namespace migdse
{

/*! \brief Number of fanout references (gate fanins plus POs) per node */
inline std::vector<uint32_t> fanout_counts( mig const& m )
{
  std::vector<uint32_t> count( m.size(), 0 );
  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
    for ( auto const& f : m.fanins( n ) )
      ++count[f.node()];
  for ( auto const& po : m.pos() )
    ++count[po.node()];
  return count;
}

/*! \brief Greedy reconvergence cut below `roots`
 *
 * Returns a sorted leaf set of at most `max_leaves` nodes. Expansion stops
 * once no leaf can be replaced without exceeding the leaf budget or after
 * `max_interior` expansions. Ties between equally cheap expansions go to the
 * lowest node id.
 */
inline std::vector<uint32_t> reconvergence_cut( mig const& m, std::vector<uint32_t> const& roots,
                                                uint32_t max_leaves, uint32_t max_interior = 64 )
{
  std::unordered_set<uint32_t> root_set( roots.begin(), roots.end() );
  std::unordered_set<uint32_t> inside( roots.begin(), roots.end() ); /* roots + expanded leaves */
  std::vector<uint32_t> leaves;
  for ( uint32_t r : roots )
    for ( auto const& f : m.fanins( r ) )
    {
      uint32_t n = f.node();
      if ( !m.is_constant( n ) && !inside.count( n ) &&
           std::find( leaves.begin(), leaves.end(), n ) == leaves.end() )
        leaves.push_back( n );
    }
  std::sort( leaves.begin(), leaves.end() );

  uint32_t expansions = 0;
  while ( expansions < max_interior )
  {
    int best_cost = std::numeric_limits<int>::max();
    size_t best_pos = leaves.size();
    for ( size_t i = 0; i < leaves.size(); ++i )
    {
      uint32_t l = leaves[i];
      if ( !m.is_gate( l ) )
        continue;
      int fresh = 0;
      for ( auto const& f : m.fanins( l ) )
      {
        uint32_t n = f.node();
        if ( !m.is_constant( n ) && !inside.count( n ) &&
             std::find( leaves.begin(), leaves.end(), n ) == leaves.end() )
          ++fresh;
      }
      int cost = fresh - 1;
      if ( cost < best_cost ) /* scan order is ascending id, so ties keep the lowest */
      {
        best_cost = cost;
        best_pos = i;
      }
    }
    if ( best_pos == leaves.size() ||
         static_cast<int>( leaves.size() ) + best_cost > static_cast<int>( max_leaves ) )
      break;
    uint32_t l = leaves[best_pos];
    leaves.erase( leaves.begin() + best_pos );
    inside.insert( l );
    for ( auto const& f : m.fanins( l ) )
    {
      uint32_t n = f.node();
      if ( !m.is_constant( n ) && !inside.count( n ) &&
           std::find( leaves.begin(), leaves.end(), n ) == leaves.end() )
        leaves.push_back( n );
    }
    std::sort( leaves.begin(), leaves.end() );
    ++expansions;
  }
  return leaves;
}

inline std::vector<uint32_t> reconvergence_cut( mig const& m, uint32_t root, uint32_t max_leaves,
                                                uint32_t max_interior = 64 )
{
  return reconvergence_cut( m, std::vector<uint32_t>{ root }, max_leaves, max_interior );
}

/*! \brief Interior gates between `roots` and the `leaves` cut, ascending by id
 *
 * Requires the cut to cover the roots: traversal must not reach a primary
 * input that is not a leaf.
 */
inline std::vector<uint32_t> collect_window( mig const& m, std::vector<uint32_t> const& roots,
                                             std::vector<uint32_t> const& leaves )
{
  std::unordered_set<uint32_t> leaf_set( leaves.begin(), leaves.end() );
  std::unordered_set<uint32_t> seen;
  std::vector<uint32_t> interior;
  auto dfs = [&]( auto&& self, uint32_t n ) -> void {
    if ( m.is_constant( n ) || leaf_set.count( n ) || seen.count( n ) )
      return;
    if ( !m.is_gate( n ) )
      throw structural_error( "window cut does not cover primary input " + std::to_string( n ) );
    seen.insert( n );
    for ( auto const& f : m.fanins( n ) )
      self( self, f.node() );
    interior.push_back( n );
  };
  for ( uint32_t r : roots )
    dfs( dfs, r );
  std::sort( interior.begin(), interior.end() );
  return interior;
}

/*! \brief Exact truth tables of window nodes over the leaf variables */
class window_tables
{
public:
  window_tables( mig const& m, std::vector<uint32_t> const& leaves,
                 std::vector<uint32_t> const& interior )
      : num_vars_( static_cast<uint32_t>( leaves.size() ) )
  {
    if ( leaves.size() > 16 )
      throw capacity_error( "window with more than 16 leaves" );
    tables_.emplace( 0, truth_table::constant0( num_vars_ ) );
    for ( uint32_t i = 0; i < leaves.size(); ++i )
      tables_.emplace( leaves[i], truth_table::elementary( num_vars_, i ) );
    for ( uint32_t n : interior ) /* ascending ids; fanins are already present */
    {
      auto const& f = m.fanins( n );
      tables_.emplace( n, truth_table::maj3( of_signal( f[0] ), of_signal( f[1] ), of_signal( f[2] ) ) );
    }
  }

  uint32_t num_vars() const { return num_vars_; }

  bool contains( uint32_t n ) const { return tables_.count( n ) != 0; }

  truth_table const& of_node( uint32_t n ) const
  {
    auto it = tables_.find( n );
    if ( it == tables_.end() )
      throw structural_error( "node " + std::to_string( n ) + " is outside the window" );
    return it->second;
  }

  truth_table of_signal( signal s ) const
  {
    auto t = of_node( s.node() );
    return s.complemented() ? t.complemented() : t;
  }

private:
  uint32_t num_vars_;
  std::unordered_map<uint32_t, truth_table> tables_;
};

} // namespace migdse
