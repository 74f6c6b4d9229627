/*!
  \file truth_table.hpp
  \brief Bit-packed truth tables for exhaustive and window-local simulation
*/

#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "common.hpp"

namespace migdse
{

/*! \brief Truth table over `num_vars` variables, packed 64 rows per word.
 *
 * Row index i encodes the assignment by its binary expansion, variable 0 in
 * the least significant bit. Unused high bits of the last word are kept zero.
 */
class truth_table
{
public:
  truth_table() = default;

  explicit truth_table( uint32_t num_vars )
      : num_vars_( num_vars ), words_( word_count( num_vars ), 0ull )
  {
  }

  static constexpr uint32_t word_count( uint32_t num_vars )
  {
    return num_vars <= 6 ? 1u : ( 1u << ( num_vars - 6 ) );
  }

  uint32_t num_vars() const { return num_vars_; }
  uint64_t num_bits() const { return uint64_t( 1 ) << num_vars_; }
  std::vector<uint64_t> const& words() const { return words_; }
  std::vector<uint64_t>& words() { return words_; }

  bool get_bit( uint64_t index ) const
  {
    return ( words_[index >> 6] >> ( index & 63 ) ) & 1;
  }

  void set_bit( uint64_t index, bool value )
  {
    if ( value )
      words_[index >> 6] |= uint64_t( 1 ) << ( index & 63 );
    else
      words_[index >> 6] &= ~( uint64_t( 1 ) << ( index & 63 ) );
  }

  uint64_t count_ones() const
  {
    uint64_t n = 0;
    for ( auto w : words_ )
      n += __builtin_popcountll( w );
    return n;
  }

  bool is_const0() const
  {
    for ( auto w : words_ )
      if ( w )
        return false;
    return true;
  }

  bool is_const1() const
  {
    truth_table t = *this;
    t.complement();
    return t.is_const0();
  }

  void complement()
  {
    for ( auto& w : words_ )
      w = ~w;
    mask_tail();
  }

  //! a complemented copy
  truth_table complemented() const
  {
    truth_table t = *this;
    t.complement();
    return t;
  }

  bool operator==( truth_table const& other ) const
  {
    return num_vars_ == other.num_vars_ && words_ == other.words_;
  }

  bool operator!=( truth_table const& other ) const { return !( *this == other ); }

  //! true iff this table is the bitwise complement of `other`
  bool is_complement_of( truth_table const& other ) const
  {
    if ( num_vars_ != other.num_vars_ )
      return false;
    truth_table t = other;
    t.complement();
    return words_ == t.words_;
  }

  //! index of the first row on which the two tables differ, or -1
  int64_t first_difference( truth_table const& other ) const
  {
    for ( size_t w = 0; w < words_.size(); ++w )
    {
      uint64_t diff = words_[w] ^ other.words_[w];
      if ( diff )
        return int64_t( w ) * 64 + __builtin_ctzll( diff );
    }
    return -1;
  }

  //! constant-0 over `num_vars` variables
  static truth_table constant0( uint32_t num_vars )
  {
    return truth_table( num_vars );
  }

  static truth_table constant1( uint32_t num_vars )
  {
    truth_table t( num_vars );
    t.complement();
    return t;
  }

  //! projection table of variable `var` (row i has bit = i's var-th binary digit)
  static truth_table elementary( uint32_t num_vars, uint32_t var )
  {
    assert( var < num_vars );
    truth_table t( num_vars );
    if ( var < 6 )
    {
      static constexpr uint64_t patterns[6] = {
          0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
          0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
      for ( auto& w : t.words_ )
        w = patterns[var];
    }
    else
    {
      const uint64_t period = uint64_t( 1 ) << ( var - 6 );
      for ( size_t w = 0; w < t.words_.size(); ++w )
        if ( ( w / period ) & 1 )
          t.words_[w] = ~uint64_t( 0 );
    }
    t.mask_tail();
    return t;
  }

  //! three-way majority, the MIG node function
  static truth_table maj3( truth_table const& a, truth_table const& b, truth_table const& c )
  {
    assert( a.num_vars_ == b.num_vars_ && b.num_vars_ == c.num_vars_ );
    truth_table t( a.num_vars_ );
    for ( size_t w = 0; w < t.words_.size(); ++w )
    {
      uint64_t x = a.words_[w], y = b.words_[w], z = c.words_[w];
      t.words_[w] = ( x & y ) | ( x & z ) | ( y & z );
    }
    return t;
  }

  //! positive cofactor with respect to `var`
  truth_table cofactor( uint32_t var, bool value ) const
  {
    truth_table t( num_vars_ );
    const uint64_t n = num_bits();
    for ( uint64_t i = 0; i < n; ++i )
    {
      uint64_t j = value ? ( i | ( uint64_t( 1 ) << var ) ) : ( i & ~( uint64_t( 1 ) << var ) );
      t.set_bit( i, get_bit( j ) );
    }
    return t;
  }

  //! true iff the function does not depend on `var`
  bool is_vacuous_in( uint32_t var ) const
  {
    return cofactor( var, false ) == cofactor( var, true );
  }

  uint64_t hash() const
  {
    uint64_t h = splitmix64( num_vars_ );
    for ( auto w : words_ )
      h = splitmix64( h ^ w );
    return h;
  }

private:
  void mask_tail()
  {
    if ( num_vars_ < 6 )
      words_[0] &= ( uint64_t( 1 ) << num_bits() ) - 1;
  }

  uint32_t num_vars_{ 0 };
  std::vector<uint64_t> words_;
};

} // namespace migdse
