/*!
  \file sweep.hpp
  \brief Functional reduction by signature matching and exhaustive window proof

  Every node receives a simulation signature of `rounds` 64-bit words; word r
  of primary input i is splitmix64(derive_seed(sweep_signature_seed, {i, r})),
  gate words follow by bitwise majority. Signatures are canonicalized by
  complementing when the lowest bit of word 0 is set, so a node and its
  complement land in the same class. Candidate pairs are then proven by exact
  truth tables over a shared window cut — equality over a complete cut implies
  global equivalence — and proven nodes are merged into the earlier node,
  complement-aware. Constant and primary-input classes participate, so
  constant nodes and input replicas collapse too. Rounds of match-and-merge
  repeat until none fires, which makes a second sweep a fixpoint.
*/

#pragma once

#include <unordered_map>
#include <vector>

#include "../common.hpp"
#include "../mig.hpp"
#include "../window.hpp"

namespace migdse
{

/*! \brief Fixed seed of the sweep signature stream */
inline constexpr uint64_t sweep_signature_seed = 0x5357454550534947ULL;

/*! \brief Simulation word for primary input `index` in signature round `round` */
inline uint64_t sweep_pattern_word( uint32_t index, uint32_t round )
{
  return splitmix64( derive_seed( sweep_signature_seed, { index, round } ) );
}

namespace detail
{

struct word_key_hash
{
  size_t operator()( std::vector<uint64_t> const& v ) const
  {
    uint64_t h = 14695981039346656037ULL;
    for ( uint64_t w : v )
      for ( int b = 0; b < 8; ++b )
      {
        h ^= ( w >> ( 8 * b ) ) & 0xff;
        h *= 1099511628211ULL;
      }
    return static_cast<size_t>( h );
  }
};

/*! \brief One match-and-merge round; returns the new network and the merge count */
inline std::pair<mig, uint32_t> sweep_round( mig const& m, uint32_t rounds )
{
  auto mark = m.reachable();

  /* signatures */
  std::vector<std::vector<uint64_t>> sig( m.size(), std::vector<uint64_t>( rounds ) );
  for ( uint32_t r = 0; r < rounds; ++r )
  {
    std::vector<uint64_t> pi_words( m.num_pis() );
    for ( uint32_t i = 0; i < m.num_pis(); ++i )
      pi_words[i] = sweep_pattern_word( i, r );
    auto words = m.simulate_node_words( pi_words );
    for ( uint32_t n = 0; n < m.size(); ++n )
      sig[n][r] = words[n];
  }

  auto canonical = [&]( uint32_t n ) {
    auto key = sig[n];
    if ( key[0] & 1 )
      for ( auto& w : key )
        w = ~w;
    return key;
  };

  /* classes; members ascend because nodes are inserted in id order */
  std::unordered_map<std::vector<uint64_t>, std::vector<uint32_t>, word_key_hash> classes;
  classes[canonical( 0 )].push_back( 0 );
  for ( uint32_t i = 1; i <= m.num_pis(); ++i )
    classes[canonical( i )].push_back( i );

  constexpr uint32_t max_attempts = 8;
  constexpr uint32_t window_leaves = 12;
  std::vector<signal> sub( m.size() );
  std::vector<bool> merged( m.size(), false );
  uint32_t merges = 0;

  for ( uint32_t b = m.first_gate(); b < m.size(); ++b )
  {
    if ( !mark[b] )
      continue;
    auto key = canonical( b );
    auto& members = classes[key];
    uint32_t attempts = 0;
    for ( uint32_t a : members )
    {
      if ( attempts++ >= max_attempts )
        break;
      if ( m.is_constant( a ) )
      {
        auto leaves = reconvergence_cut( m, b, window_leaves, 16 );
        window_tables tables( m, leaves, collect_window( m, { b }, leaves ) );
        auto const tb = tables.of_node( b );
        if ( tb.is_const0() )
        {
          sub[b] = const0;
          merged[b] = true;
          ++merges;
          break;
        }
        if ( tb.is_const1() )
        {
          sub[b] = const1;
          merged[b] = true;
          ++merges;
          break;
        }
      }
      else if ( m.is_pi( a ) )
      {
        auto leaves = reconvergence_cut( m, b, window_leaves, 16 );
        if ( std::find( leaves.begin(), leaves.end(), a ) == leaves.end() )
          continue;
        window_tables tables( m, leaves, collect_window( m, { b }, leaves ) );
        auto const tb = tables.of_node( b );
        auto const ta = tables.of_node( a );
        if ( tb == ta )
        {
          sub[b] = signal( a, false );
          merged[b] = true;
          ++merges;
          break;
        }
        if ( tb.is_complement_of( ta ) )
        {
          sub[b] = signal( a, true );
          merged[b] = true;
          ++merges;
          break;
        }
      }
      else
      {
        auto leaves = reconvergence_cut( m, { a, b }, window_leaves, 16 );
        window_tables tables( m, leaves, collect_window( m, { a, b }, leaves ) );
        auto const tb = tables.of_node( b );
        auto const ta = tables.of_node( a );
        if ( tb == ta )
        {
          sub[b] = signal( a, false );
          merged[b] = true;
          ++merges;
          break;
        }
        if ( tb.is_complement_of( ta ) )
        {
          sub[b] = signal( a, true );
          merged[b] = true;
          ++merges;
          break;
        }
      }
    }
    if ( !merged[b] )
      members.push_back( b ); /* unmerged nodes become future targets */
  }

  /* rebuild with substitutions composed transitively */
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
    if ( merged[n] )
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
  return { cleanup_dangling( dest ), merges };
}

} // namespace detail

/*! \brief Functional sweep to an internal fixpoint; node count never increases */
inline mig pass_sweep( mig const& m, uint32_t rounds = 4 )
{
  mig current = m;
  while ( true )
  {
    auto [next, merges] = detail::sweep_round( current, rounds );
    if ( merges == 0 )
      return current;
    current = std::move( next );
  }
}

} // namespace migdse
