/*!
  \file convert.hpp
  \brief Structural conversions between AIGs and MIGs

  AND-to-majority embedding uses MAJ(a, b, 0); the reverse direction expands
  each true three-input majority into at most four ANDs via
  MAJ(a, b, c) = (a AND b) OR ((a OR b) AND c), while majority nodes with a
  constant fanin collapse back to a single AND. Both directions preserve
  functionality signal by signal.
*/

#pragma once

#include <vector>

#include "../aig.hpp"
#include "../mig.hpp"

namespace migdse
{

/*! \brief Embeds an AIG into a MIG; each AND becomes MAJ(a, b, 0) */
inline mig aig_to_mig( aig const& a )
{
  mig m( a.num_pis() );
  m.pi_names() = a.pi_names();
  m.po_names() = a.po_names();

  std::vector<signal> map( a.size() );
  map[0] = const0;
  for ( uint32_t i = 0; i < a.num_pis(); ++i )
    map[1 + i] = m.pi( i );

  auto mark = a.reachable();
  for ( uint32_t n = a.first_gate(); n < a.size(); ++n )
  {
    if ( !mark[n] )
      continue;
    auto const& f = a.fanins( n );
    map[n] = m.make_and( map[f[0].node()] ^ f[0].complemented(),
                         map[f[1].node()] ^ f[1].complemented() );
  }
  for ( uint32_t k = 0; k < a.num_pos(); ++k )
  {
    auto po = a.po( k );
    m.create_po( map[po.node()] ^ po.complemented() );
  }
  return m;
}

/*! \brief Expands a MIG into an AIG; at most 4 ANDs per majority node */
inline aig mig_to_aig( mig const& m )
{
  aig a( m.num_pis() );
  a.pi_names() = m.pi_names();
  a.po_names() = m.po_names();

  std::vector<signal> map( m.size() );
  map[0] = const0;
  for ( uint32_t i = 0; i < m.num_pis(); ++i )
    map[1 + i] = a.pi( i );

  auto mark = m.reachable();
  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
  {
    if ( !mark[n] )
      continue;
    auto const& f = m.fanins( n );
    signal s[3];
    int const_pos = -1;
    for ( int i = 0; i < 3; ++i )
    {
      if ( m.is_constant( f[i].node() ) )
        const_pos = i;
      s[i] = map[f[i].node()] ^ f[i].complemented();
    }
    if ( const_pos >= 0 )
    {
      signal x = s[( const_pos + 1 ) % 3], y = s[( const_pos + 2 ) % 3];
      map[n] = f[const_pos] == const0 ? a.make_and( x, y ) : a.make_or( x, y );
    }
    else
    {
      map[n] = a.make_or( a.make_and( s[0], s[1] ), a.make_and( a.make_or( s[0], s[1] ), s[2] ) );
    }
  }
  for ( uint32_t k = 0; k < m.num_pos(); ++k )
  {
    auto po = m.po( k );
    a.create_po( map[po.node()] ^ po.complemented() );
  }
  return a;
}

} // namespace migdse
