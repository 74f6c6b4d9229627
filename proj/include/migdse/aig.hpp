/*!
  \file aig.hpp
  \brief And-inverter graph arena, the interchange and reporting representation
*/

#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace migdse
{

/*! \brief And-inverter graph: 2-input AND nodes with complementable edges.
 *
 * Same arena scheme as `mig`: node 0 is constant 0, then PIs, then gates in
 * topological order (fanin ids strictly smaller than the node id).
 */
class aig
{
public:
  struct node_data
  {
    std::array<signal, 2> fanins{};
    uint32_t level{ 0 };
  };

  explicit aig( uint32_t num_pis = 0 ) : nodes_( 1 + num_pis ), num_pis_( num_pis ) {}

  uint32_t size() const { return static_cast<uint32_t>( nodes_.size() ); }
  uint32_t num_pis() const { return num_pis_; }
  uint32_t num_pos() const { return static_cast<uint32_t>( pos_.size() ); }
  uint32_t num_gates() const { return size() - 1 - num_pis_; }

  bool is_constant( uint32_t n ) const { return n == 0; }
  bool is_pi( uint32_t n ) const { return n >= 1 && n <= num_pis_; }
  bool is_gate( uint32_t n ) const { return n > num_pis_ && n < size(); }
  uint32_t first_gate() const { return num_pis_ + 1; }

  signal pi( uint32_t index ) const
  {
    if ( index >= num_pis_ )
      throw structural_error( "primary input index out of range" );
    return signal( 1 + index, false );
  }

  std::array<signal, 2> const& fanins( uint32_t n ) const
  {
    assert( is_gate( n ) );
    return nodes_[n].fanins;
  }

  uint32_t level( uint32_t n ) const { return nodes_[n].level; }
  std::vector<signal> const& pos() const { return pos_; }
  signal po( uint32_t index ) const { return pos_.at( index ); }

  void create_po( signal f )
  {
    check_signal( f );
    pos_.push_back( f );
  }

  std::vector<std::string>& pi_names() { return pi_names_; }
  std::vector<std::string>& po_names() { return po_names_; }
  std::vector<std::string> const& pi_names() const { return pi_names_; }
  std::vector<std::string> const& po_names() const { return po_names_; }

  /*! \brief Creates (or finds) AND(a, b) with constant and idempotence rules */
  signal make_and( signal a, signal b )
  {
    check_signal( a );
    check_signal( b );
    if ( a.lit > b.lit )
      std::swap( a, b );

    if ( a == const0 )
      return const0;
    if ( a == const1 )
      return b;
    if ( a == b )
      return a;
    if ( a == !b )
      return const0;

    key_t key{ a.lit, b.lit };
    if ( auto it = strash_.find( key ); it != strash_.end() )
      return signal( it->second, false );

    uint32_t lvl = 1 + std::max( nodes_[a.node()].level, nodes_[b.node()].level );
    uint32_t id = size();
    nodes_.push_back( node_data{ { a, b }, lvl } );
    strash_.emplace( key, id );
    return signal( id, false );
  }

  signal make_or( signal a, signal b ) { return !make_and( !a, !b ); }

  std::vector<bool> reachable() const
  {
    std::vector<bool> mark( size(), false );
    std::vector<uint32_t> stack;
    for ( auto const& po : pos_ )
    {
      if ( !mark[po.node()] )
      {
        mark[po.node()] = true;
        stack.push_back( po.node() );
      }
    }
    while ( !stack.empty() )
    {
      uint32_t n = stack.back();
      stack.pop_back();
      if ( !is_gate( n ) )
        continue;
      for ( auto const& f : nodes_[n].fanins )
      {
        if ( !mark[f.node()] )
        {
          mark[f.node()] = true;
          stack.push_back( f.node() );
        }
      }
    }
    return mark;
  }

  uint32_t node_count() const
  {
    auto mark = reachable();
    uint32_t count = 0;
    for ( uint32_t n = first_gate(); n < size(); ++n )
      if ( mark[n] )
        ++count;
    return count;
  }

  uint32_t depth() const
  {
    uint32_t d = 0;
    for ( auto const& po : pos_ )
      d = std::max( d, nodes_[po.node()].level );
    return d;
  }

  std::vector<uint64_t> simulate_words( std::vector<uint64_t> const& pi_words ) const
  {
    assert( pi_words.size() == num_pis_ );
    std::vector<uint64_t> w( size() );
    w[0] = 0;
    for ( uint32_t i = 0; i < num_pis_; ++i )
      w[1 + i] = pi_words[i];
    for ( uint32_t n = first_gate(); n < size(); ++n )
    {
      auto const& f = nodes_[n].fanins;
      auto in = [&]( signal s ) { return s.complemented() ? ~w[s.node()] : w[s.node()]; };
      w[n] = in( f[0] ) & in( f[1] );
    }
    std::vector<uint64_t> out;
    out.reserve( pos_.size() );
    for ( auto const& po : pos_ )
      out.push_back( po.complemented() ? ~w[po.node()] : w[po.node()] );
    return out;
  }

private:
  using key_t = std::array<uint32_t, 2>;

  struct key_hash
  {
    size_t operator()( key_t const& k ) const
    {
      return splitmix64( ( uint64_t( k[0] ) << 32 ) | k[1] );
    }
  };

  void check_signal( signal s ) const
  {
    if ( s.node() >= size() )
      throw structural_error( "signal refers to a non-existing node" );
  }

  std::vector<node_data> nodes_;
  uint32_t num_pis_;
  std::vector<signal> pos_;
  std::vector<std::string> pi_names_, po_names_;
  std::unordered_map<key_t, uint32_t, key_hash> strash_;
};

} // namespace migdse
