/*!
  \file common.hpp
  \brief Deterministic RNG streams, hashing and error types shared across the library
*/

#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace migdse
{

/*! \brief Base class for all library errors */
class error : public std::runtime_error
{
public:
  explicit error( std::string const& what ) : std::runtime_error( what ) {}
};

/*! \brief Malformed input file; carries a 1-based line number when known */
class parse_error : public error
{
public:
  parse_error( std::string const& what, uint64_t line = 0 )
      : error( line ? "line " + std::to_string( line ) + ": " + what : what ), line_number( line ) {}

  uint64_t line_number;
};

/*! \brief Invalid network access (bad signal id, interface mismatch, ...) */
class structural_error : public error
{
public:
  using error::error;
};

/*! \brief Input exceeds a hard capacity bound (e.g. exhaustive simulation width) */
class capacity_error : public error
{
public:
  using error::error;
};

/*! \brief Edge handle: node index plus edge-level complement flag.
 *
 * Encoded as a literal `2 * node + complemented`. Node 0 is the constant-0
 * node; the complemented constant is logic 1. Shared by every network
 * representation in the library.
 */
struct signal
{
  uint32_t lit{ 0 };

  constexpr signal() = default;
  constexpr explicit signal( uint32_t literal ) : lit( literal ) {}
  constexpr signal( uint32_t node, bool complemented ) : lit( 2 * node + ( complemented ? 1 : 0 ) ) {}

  constexpr uint32_t node() const { return lit >> 1; }
  constexpr bool complemented() const { return lit & 1; }

  constexpr signal operator!() const { return signal( lit ^ 1 ); }
  constexpr signal operator^( bool c ) const { return signal( lit ^ ( c ? 1u : 0u ) ); }

  constexpr bool operator==( signal const& o ) const { return lit == o.lit; }
  constexpr bool operator!=( signal const& o ) const { return lit != o.lit; }
  constexpr bool operator<( signal const& o ) const { return lit < o.lit; }
};

inline constexpr signal const0{ 0, false };
inline constexpr signal const1{ 0, true };

inline constexpr uint64_t golden_gamma = 0x9e3779b97f4a7c15ull;

/*! \brief One splitmix64 output for the given state */
inline constexpr uint64_t splitmix64( uint64_t x )
{
  x += golden_gamma;
  x = ( x ^ ( x >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94d049bb133111ebull;
  return x ^ ( x >> 31 );
}

/*! \brief Positional key derivation: folds a coordinate tuple into a stream seed.
 *
 * Identical (seed, coordinates) always derive the identical stream, independent
 * of which thread or in which order streams are created.
 */
inline constexpr uint64_t derive_seed( uint64_t seed, std::initializer_list<uint64_t> coords )
{
  uint64_t h = splitmix64( seed ^ 0x436865737321ull );
  for ( auto c : coords )
  {
    h = splitmix64( h ^ ( c + golden_gamma ) );
  }
  return h;
}

/*! \brief Counter-based deterministic random stream (splitmix64 sequence) */
class rng_stream
{
public:
  explicit constexpr rng_stream( uint64_t seed = 0 ) : state_( seed ) {}

  constexpr uint64_t next_u64()
  {
    state_ += golden_gamma;
    uint64_t x = state_;
    x = ( x ^ ( x >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
    x = ( x ^ ( x >> 27 ) ) * 0x94d049bb133111ebull;
    return x ^ ( x >> 31 );
  }

  //! uniform double in [0, 1)
  constexpr double next_double()
  {
    return static_cast<double>( next_u64() >> 11 ) * 0x1.0p-53;
  }

  //! uniform double in [lo, hi]
  constexpr double next_real( double lo, double hi )
  {
    return lo + ( hi - lo ) * next_double();
  }

  //! uniform integer in [0, n); n > 0
  constexpr uint64_t next_below( uint64_t n )
  {
    /* multiply-shift; bias is < 2^-64 * n, irrelevant at our scales */
    return static_cast<uint64_t>( ( static_cast<unsigned __int128>( next_u64() ) * n ) >> 64 );
  }

  constexpr uint64_t state() const { return state_; }

private:
  uint64_t state_;
};

/*! \brief FNV-1a 64-bit hash of a byte string; stable across platforms and releases */
inline constexpr uint64_t fnv1a64( std::string_view data )
{
  uint64_t h = 0xcbf29ce484222325ull;
  for ( char c : data )
  {
    h ^= static_cast<unsigned char>( c );
    h *= 0x100000001b3ull;
  }
  return h;
}

/*! \brief Lower-case hexadecimal rendering of a 64-bit value (16 digits) */
inline std::string to_hex( uint64_t v )
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string s( 16, '0' );
  for ( int i = 15; i >= 0; --i )
  {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

} // namespace migdse
