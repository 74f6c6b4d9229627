/*!
  \file rewrite.hpp
  \brief Algebraic rewriting over majority associativity and distributivity

  One topological sweep rebuilds the network; at every gate the pass compares
  the plain copy against all one-step associativity/distributivity variants of
  the mapped operands and keeps the form with the lowest net node score: nodes
  the structural hash actually allocates minus operand nodes whose only fanout
  was this gate, which a decomposing variant sets free. With area increase
  allowed, a variant that merely matches the score of the plain copy is also
  taken, which restructures the network without growing it. Complement
  propagation needs no explicit rule: the structural hash is closed under
  self-duality, so a complemented replica can never be created. A final guard
  returns the input unchanged if the rebuilt network has more reachable nodes
  and area increase is not allowed.
*/

#pragma once

#include <vector>

#include "../mig.hpp"
#include "../window.hpp"
#include "detail.hpp"

namespace migdse
{

enum class rewrite_rules
{
  associativity,
  distributivity,
  all
};

/*! \brief One rewriting sweep; equivalence-preserving and deterministic */
inline mig pass_rewrite( mig const& m, rewrite_rules rules, bool allow_area_increase )
{
  mig dest( m.num_pis() );
  dest.pi_names() = m.pi_names();
  dest.po_names() = m.po_names();

  std::vector<signal> map( m.size() );
  map[0] = const0;
  for ( uint32_t i = 0; i < m.num_pis(); ++i )
    map[1 + i] = dest.pi( i );

  auto const counts = fanout_counts( m );
  auto mark = m.reachable();
  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
  {
    if ( !mark[n] )
      continue;
    auto const& f = m.fanins( n );
    std::array<signal, 3> ops;
    for ( int i = 0; i < 3; ++i )
      ops[i] = map[f[i].node()] ^ f[i].complemented();

    std::vector<detail::assoc_variant> avs;
    std::vector<detail::dist_variant> dvs;
    if ( rules == rewrite_rules::associativity || rules == rewrite_rules::all )
      avs = detail::assoc_variants( dest, ops );
    if ( rules == rewrite_rules::distributivity || rules == rewrite_rules::all )
      dvs = detail::dist_variants( dest, ops );

    /* operand nodes whose only reader is this gate are freed by a variant
       that decomposes them instead of referencing them */
    auto freed_by = [&]( uint8_t drops ) -> int {
      int freed = 0;
      for ( int i = 0; i < 3; ++i )
        if ( ( drops >> i ) & 1 )
          if ( m.is_gate( f[i].node() ) && counts[f[i].node()] == 1 )
            ++freed;
      return freed;
    };

    auto const wm = dest.mark();
    auto eval = [&]( size_t idx ) -> int { /* idx 0 = plain copy, then variants in order */
      int freed = 0;
      if ( idx == 0 )
        dest.make_maj( ops[0], ops[1], ops[2] );
      else if ( idx <= avs.size() )
      {
        detail::build_variant( dest, avs[idx - 1] );
        freed = freed_by( avs[idx - 1].drops );
      }
      else
      {
        detail::build_variant( dest, dvs[idx - 1 - avs.size()] );
        freed = freed_by( dvs[idx - 1 - avs.size()].drops );
      }
      int const created = static_cast<int>( dest.size() - wm );
      dest.rollback( wm );
      return created - freed;
    };

    int const default_score = eval( 0 );
    size_t chosen = 0;
    int chosen_score = default_score;
    for ( size_t idx = 1; idx <= avs.size() + dvs.size(); ++idx )
    {
      int score = eval( idx );
      if ( score < chosen_score )
      {
        chosen = idx;
        chosen_score = score;
      }
      else if ( allow_area_increase && chosen == 0 && score == default_score )
        chosen = idx;
    }

    /* rebuild the winner; construction from the same watermark state is id-identical */
    if ( chosen == 0 )
      map[n] = dest.make_maj( ops[0], ops[1], ops[2] );
    else if ( chosen <= avs.size() )
      map[n] = detail::build_variant( dest, avs[chosen - 1] );
    else
      map[n] = detail::build_variant( dest, dvs[chosen - 1 - avs.size()] );
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
