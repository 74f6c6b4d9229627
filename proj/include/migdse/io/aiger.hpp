/*!
  \file aiger.hpp
  \brief ASCII AIGER ("aag") reader and writer for combinational networks

  Only the combinational subset is supported: MILOA header with L = 0,
  input/output literal lists, AND definitions, an optional symbol table and an
  optional comment section. Emission is canonical: PO-reachable gates only,
  re-indexed topologically, fanins ordered larger-first, symbol table emitted
  only when names are present. A parse/write round trip is a byte fixed point
  after one normalization pass.
*/

#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "../aig.hpp"
#include "../common.hpp"

namespace migdse
{

namespace detail
{

inline bool parse_uint64( std::string_view tok, uint64_t& out )
{
  if ( tok.empty() )
    return false;
  uint64_t v = 0;
  for ( char c : tok )
  {
    if ( c < '0' || c > '9' )
      return false;
    if ( v > ( UINT64_MAX - ( c - '0' ) ) / 10 )
      return false;
    v = v * 10 + ( c - '0' );
  }
  out = v;
  return true;
}

inline std::vector<std::string> split_ws( std::string const& line )
{
  std::vector<std::string> toks;
  std::istringstream ss( line );
  std::string t;
  while ( ss >> t )
    toks.push_back( t );
  return toks;
}

} // namespace detail

/*! \brief Parses an ASCII AIGER stream into an `aig` */
inline aig parse_aiger_ascii( std::istream& in )
{
  uint64_t line_no = 0;
  std::string line;

  auto next_line = [&]() -> bool {
    if ( !std::getline( in, line ) )
      return false;
    if ( !line.empty() && line.back() == '\r' )
      line.pop_back();
    ++line_no;
    return true;
  };

  if ( !next_line() )
    throw parse_error( "empty input, expected aag header", 0 );

  auto toks = detail::split_ws( line );
  if ( toks.size() != 6 || toks[0] != "aag" )
    throw parse_error( "malformed header, expected 'aag M I L O A'", line_no );

  uint64_t m, i, l, o, a;
  if ( !detail::parse_uint64( toks[1], m ) || !detail::parse_uint64( toks[2], i ) ||
       !detail::parse_uint64( toks[3], l ) || !detail::parse_uint64( toks[4], o ) ||
       !detail::parse_uint64( toks[5], a ) )
    throw parse_error( "malformed header, non-numeric field", line_no );
  if ( l != 0 )
    throw parse_error( "latches are not supported (L must be 0)", line_no );
  if ( i + a > m )
    throw parse_error( "header inconsistent: I + A exceeds M", line_no );

  const uint64_t max_lit = 2 * m + 1;
  auto read_literal = [&]( std::string const& what ) -> uint64_t {
    if ( !next_line() )
      throw parse_error( "unexpected end of file, expected " + what, line_no );
    auto t = detail::split_ws( line );
    uint64_t lit;
    if ( t.size() != 1 || !detail::parse_uint64( t[0], lit ) )
      throw parse_error( "expected a single literal (" + what + ")", line_no );
    if ( lit > max_lit )
      throw parse_error( "literal out of range", line_no );
    return lit;
  };

  aig result( static_cast<uint32_t>( i ) );

  /* var -> signal; inputs may use any distinct even non-constant literals */
  std::unordered_map<uint64_t, signal> var_map;
  var_map.emplace( 0, const0 );
  for ( uint64_t k = 0; k < i; ++k )
  {
    uint64_t lit = read_literal( "input literal" );
    if ( lit < 2 || ( lit & 1 ) )
      throw parse_error( "input literal must be even and non-constant", line_no );
    if ( !var_map.emplace( lit >> 1, result.pi( static_cast<uint32_t>( k ) ) ).second )
      throw parse_error( "duplicate input literal", line_no );
  }

  std::vector<uint64_t> output_lits;
  std::vector<uint64_t> output_lines;
  output_lits.reserve( o );
  for ( uint64_t k = 0; k < o; ++k )
  {
    output_lits.push_back( read_literal( "output literal" ) );
    output_lines.push_back( line_no );
  }

  struct and_def
  {
    uint64_t rhs0, rhs1, line;
  };
  std::unordered_map<uint64_t, and_def> and_defs;
  std::vector<uint64_t> and_order;
  for ( uint64_t k = 0; k < a; ++k )
  {
    if ( !next_line() )
      throw parse_error( "unexpected end of file, expected AND definition", line_no );
    auto t = detail::split_ws( line );
    uint64_t lhs, r0, r1;
    if ( t.size() != 3 || !detail::parse_uint64( t[0], lhs ) ||
         !detail::parse_uint64( t[1], r0 ) || !detail::parse_uint64( t[2], r1 ) )
      throw parse_error( "expected 'lhs rhs0 rhs1'", line_no );
    if ( lhs > max_lit || r0 > max_lit || r1 > max_lit )
      throw parse_error( "literal out of range", line_no );
    if ( lhs < 2 || ( lhs & 1 ) )
      throw parse_error( "AND left-hand side must be even and non-constant", line_no );
    if ( var_map.count( lhs >> 1 ) || and_defs.count( lhs >> 1 ) )
      throw parse_error( "literal defined twice", line_no );
    and_defs.emplace( lhs >> 1, and_def{ r0, r1, line_no } );
    and_order.push_back( lhs >> 1 );
  }

  /* resolve definitions independent of file order, detecting cycles */
  std::unordered_map<uint64_t, uint8_t> state; /* 1 = visiting, 2 = done */
  auto resolve = [&]( auto&& self, uint64_t var ) -> signal {
    if ( auto it = var_map.find( var ); it != var_map.end() )
      return it->second;
    auto dit = and_defs.find( var );
    if ( dit == and_defs.end() )
      throw parse_error( "literal " + std::to_string( 2 * var ) + " is used but never defined" );
    if ( state[var] == 1 )
      throw parse_error( "cyclic AND definition", dit->second.line );
    state[var] = 1;
    signal s0 = self( self, dit->second.rhs0 >> 1 ) ^ ( dit->second.rhs0 & 1 );
    signal s1 = self( self, dit->second.rhs1 >> 1 ) ^ ( dit->second.rhs1 & 1 );
    state[var] = 2;
    signal res = result.make_and( s0, s1 );
    var_map.emplace( var, res );
    return res;
  };

  for ( auto var : and_order )
    resolve( resolve, var );
  for ( uint64_t k = 0; k < o; ++k )
  {
    uint64_t lit = output_lits[k];
    if ( lit > 1 && !var_map.count( lit >> 1 ) && !and_defs.count( lit >> 1 ) )
      throw parse_error( "output refers to an undefined literal", output_lines[k] );
    result.create_po( resolve( resolve, lit >> 1 ) ^ ( lit & 1 ) );
  }

  /* optional symbol table and comments */
  while ( next_line() )
  {
    if ( line.empty() )
      continue;
    if ( line[0] == 'c' && ( line.size() == 1 || line[1] == ' ' ) )
      break; /* comment section, ignore the rest */
    if ( line[0] == 'i' || line[0] == 'o' )
    {
      auto sp = line.find( ' ' );
      uint64_t idx;
      if ( sp == std::string::npos || !detail::parse_uint64( line.substr( 1, sp - 1 ), idx ) )
        throw parse_error( "malformed symbol table entry", line_no );
      auto& names = line[0] == 'i' ? result.pi_names() : result.po_names();
      size_t count = line[0] == 'i' ? i : o;
      if ( idx >= count )
        throw parse_error( "symbol index out of range", line_no );
      if ( names.empty() )
        names.resize( count );
      names[idx] = line.substr( sp + 1 );
    }
    else if ( line[0] == 'l' )
    {
      throw parse_error( "latch symbol in combinational file", line_no );
    }
    else
    {
      throw parse_error( "unexpected content after AND definitions", line_no );
    }
  }

  return result;
}

inline aig parse_aiger_ascii( std::string const& text )
{
  std::istringstream ss( text );
  return parse_aiger_ascii( ss );
}

/*! \brief Writes an `aig` in canonical ASCII AIGER form */
inline void write_aiger_ascii( aig const& a, std::ostream& out )
{
  auto mark = a.reachable();
  std::vector<uint64_t> lit_of( a.size(), 0 );
  lit_of[0] = 0;
  for ( uint32_t k = 0; k < a.num_pis(); ++k )
    lit_of[1 + k] = 2 * ( uint64_t( k ) + 1 );

  uint64_t var = a.num_pis();
  uint32_t num_ands = 0;
  for ( uint32_t n = a.first_gate(); n < a.size(); ++n )
  {
    if ( !mark[n] )
      continue;
    lit_of[n] = 2 * ( ++var );
    ++num_ands;
  }

  out << "aag " << var << ' ' << a.num_pis() << " 0 " << a.num_pos() << ' ' << num_ands << '\n';
  for ( uint32_t k = 0; k < a.num_pis(); ++k )
    out << 2 * ( uint64_t( k ) + 1 ) << '\n';
  auto lit = [&]( signal s ) { return lit_of[s.node()] + ( s.complemented() ? 1 : 0 ); };
  for ( auto const& po : a.pos() )
    out << lit( po ) << '\n';
  for ( uint32_t n = a.first_gate(); n < a.size(); ++n )
  {
    if ( !mark[n] )
      continue;
    uint64_t l0 = lit( a.fanins( n )[0] );
    uint64_t l1 = lit( a.fanins( n )[1] );
    if ( l0 > l1 )
      std::swap( l0, l1 );
    out << lit_of[n] << ' ' << l0 << ' ' << l1 << '\n';
  }
  for ( size_t k = 0; k < a.pi_names().size(); ++k )
    if ( !a.pi_names()[k].empty() )
      out << 'i' << k << ' ' << a.pi_names()[k] << '\n';
  for ( size_t k = 0; k < a.po_names().size(); ++k )
    if ( !a.po_names()[k].empty() )
      out << 'o' << k << ' ' << a.po_names()[k] << '\n';
}

inline std::string write_aiger_ascii( aig const& a )
{
  std::ostringstream ss;
  write_aiger_ascii( a, ss );
  return ss.str();
}

} // namespace migdse
