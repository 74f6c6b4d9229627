/*!
  \file detail.hpp
  \brief Shared helpers for the algebraic passes

  Variant enumeration works on the majority axioms
    associativity:  MAJ(x, u, MAJ(y, u, z)) = MAJ(z, u, MAJ(y, u, x))
    distributivity: MAJ(x, y, MAJ(u, v, z)) = MAJ(MAJ(x, y, u), MAJ(x, y, v), z)
  in both directions. A complemented gate operand is handled through
  self-duality by complementing its fanin triple, so the rules apply to any
  edge polarity. Enumeration order is fixed (operand positions ascending), so
  passes built on top are deterministic.
*/

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "../mig.hpp"

namespace migdse::detail
{

/*! \brief Fanins of a gate operand with the edge complement pushed through self-duality */
inline std::optional<std::array<signal, 3>> effective_fanins( mig const& m, signal s )
{
  if ( !m.is_gate( s.node() ) )
    return std::nullopt;
  auto f = m.fanins( s.node() );
  if ( s.complemented() )
    for ( auto& x : f )
      x = !x;
  return f;
}

/*! \brief A re-association plan: build MAJ(z, u, MAJ(y, u, x))
 *
 * `drops` is a bitmask of operand positions the plan decomposes instead of
 * referencing, used to credit nodes that would lose their last fanout.
 */
struct assoc_variant
{
  signal u, x, y, z;
  uint8_t drops;
};

/*! \brief A distributivity plan; `to_right` selects the build direction */
struct dist_variant
{
  bool to_right;      /* true: MAJ(MAJ(x,y,u), MAJ(x,y,v), z); false: MAJ(x, y, MAJ(u,v,z)) */
  signal x, y, u, v, z;
  uint8_t drops;
};

/*! \brief All one-step re-associations of the operand triple `ops` */
inline std::vector<assoc_variant> assoc_variants( mig const& m, std::array<signal, 3> const& ops )
{
  std::vector<assoc_variant> out;
  for ( int i = 0; i < 3; ++i )
  {
    auto inner = effective_fanins( m, ops[i] );
    if ( !inner )
      continue;
    signal const o1 = ops[( i + 1 ) % 3], o2 = ops[( i + 2 ) % 3];
    for ( int a = 0; a < 2; ++a ) /* which outer operand plays u */
    {
      signal const u = a == 0 ? o1 : o2;
      signal const x = a == 0 ? o2 : o1;
      for ( int j = 0; j < 3; ++j )
      {
        if ( ( *inner )[j] != u )
          continue;
        /* the two remaining inner operands; either may be swapped out as z */
        signal const p = ( *inner )[( j + 1 ) % 3], q = ( *inner )[( j + 2 ) % 3];
        out.push_back( { u, x, p, q, static_cast<uint8_t>( 1u << i ) } );
        out.push_back( { u, x, q, p, static_cast<uint8_t>( 1u << i ) } );
      }
    }
  }
  return out;
}

/*! \brief All one-step distributivity moves of the operand triple `ops` */
inline std::vector<dist_variant> dist_variants( mig const& m, std::array<signal, 3> const& ops )
{
  std::vector<dist_variant> out;
  /* left-to-right: one gate operand is the inner majority */
  for ( int i = 0; i < 3; ++i )
  {
    auto inner = effective_fanins( m, ops[i] );
    if ( !inner )
      continue;
    signal const x = ops[( i + 1 ) % 3], y = ops[( i + 2 ) % 3];
    for ( int j = 0; j < 3; ++j )
    {
      signal const z = ( *inner )[j];
      signal const u = ( *inner )[( j + 1 ) % 3], v = ( *inner )[( j + 2 ) % 3];
      out.push_back( { true, x, y, u, v, z, static_cast<uint8_t>( 1u << i ) } );
    }
  }
  /* right-to-left: two gate operands sharing two common literals collapse */
  for ( int i = 0; i < 3; ++i )
  {
    auto f1 = effective_fanins( m, ops[i] );
    auto f2 = effective_fanins( m, ops[( i + 1 ) % 3] );
    if ( !f1 || !f2 )
      continue;
    signal const z = ops[( i + 2 ) % 3];
    /* find two shared literals x, y between the triples */
    for ( int a = 0; a < 3; ++a )
      for ( int b = a + 1; b < 3; ++b )
      {
        signal const x = ( *f1 )[a], y = ( *f1 )[b];
        signal const u = ( *f1 )[3 - a - b];
        for ( int c = 0; c < 3; ++c )
          for ( int d = 0; d < 3; ++d )
          {
            if ( c == d )
              continue;
            if ( ( *f2 )[c] != x || ( *f2 )[d] != y )
              continue;
            signal const v = ( *f2 )[3 - c - d];
            out.push_back( { false, x, y, u, v, z,
                             static_cast<uint8_t>( ( 1u << i ) | ( 1u << ( ( i + 1 ) % 3 ) ) ) } );
          }
      }
  }
  return out;
}

/*! \brief Materializes a variant in `dest`; may create up to two nodes */
inline signal build_variant( mig& dest, assoc_variant const& v )
{
  return dest.make_maj( v.z, v.u, dest.make_maj( v.y, v.u, v.x ) );
}

inline signal build_variant( mig& dest, dist_variant const& v )
{
  if ( v.to_right )
    return dest.make_maj( dest.make_maj( v.x, v.y, v.u ), dest.make_maj( v.x, v.y, v.v ), v.z );
  return dest.make_maj( v.x, v.y, dest.make_maj( v.u, v.v, v.z ) );
}

} // namespace migdse::detail
