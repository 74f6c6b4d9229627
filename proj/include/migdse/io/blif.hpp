/*!
  \file blif.hpp
  \brief Combinational BLIF subset: .model / .inputs / .outputs / .names

  Cover rows are sum-of-cubes over {0,1,-}; all rows of one .names must share
  the output phase (an all-0-phase cover describes the OFF-set). Sequential and
  hierarchical constructs (.latch, .subckt, ...) are rejected.

  Emission is canonical: gates are enumerated in the depth-first postorder a
  re-parse uses to allocate nodes, so names and line order survive a round
  trip. Each true majority node becomes a 3-input cover of its pairwise
  products with fanin complements folded into the cube polarities, nodes with
  a constant fanin become 2-input AND/OR covers, and every primary output gets
  one buffer/inverter cover. Because majority covers re-parse as sums of
  products, the first emission of a majority-bearing network may differ from
  the second, but the second emission is a byte fixed point.
*/

#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "../common.hpp"
#include "../mig.hpp"

namespace migdse
{

/*! \brief Parses a BLIF stream into a `mig` (AND/OR/cube structure via majority embeddings) */
inline mig parse_blif( std::istream& in )
{
  struct names_def
  {
    std::vector<std::string> inputs;
    std::string output;
    std::vector<std::string> cubes;
    std::vector<char> values;
    uint64_t line;
  };

  uint64_t line_no = 0;
  std::string raw;
  std::vector<std::pair<std::string, uint64_t>> lines; /* logical lines with numbers */

  while ( std::getline( in, raw ) )
  {
    ++line_no;
    if ( !raw.empty() && raw.back() == '\r' )
      raw.pop_back();
    if ( auto hash = raw.find( '#' ); hash != std::string::npos )
      raw.erase( hash );
    uint64_t first_line = line_no;
    while ( !raw.empty() && raw.back() == '\\' )
    {
      raw.pop_back();
      std::string cont;
      if ( !std::getline( in, cont ) )
        break;
      ++line_no;
      if ( !cont.empty() && cont.back() == '\r' )
        cont.pop_back();
      if ( auto hash = cont.find( '#' ); hash != std::string::npos )
        cont.erase( hash );
      raw += cont;
    }
    if ( raw.find_first_not_of( " \t" ) == std::string::npos )
      continue;
    lines.emplace_back( raw, first_line );
  }

  std::vector<std::string> input_names, output_names;
  std::vector<names_def> defs;
  bool saw_model = false;

  size_t pos = 0;
  auto tokens_of = [&]( std::string const& l ) {
    std::vector<std::string> toks;
    std::istringstream ss( l );
    std::string t;
    while ( ss >> t )
      toks.push_back( t );
    return toks;
  };

  while ( pos < lines.size() )
  {
    auto [l, ln] = lines[pos];
    auto toks = tokens_of( l );
    ++pos;
    if ( toks.empty() )
      continue;
    auto const& cmd = toks[0];
    if ( cmd == ".model" )
    {
      saw_model = true;
    }
    else if ( cmd == ".inputs" )
    {
      input_names.insert( input_names.end(), toks.begin() + 1, toks.end() );
    }
    else if ( cmd == ".outputs" )
    {
      output_names.insert( output_names.end(), toks.begin() + 1, toks.end() );
    }
    else if ( cmd == ".names" )
    {
      if ( toks.size() < 2 )
        throw parse_error( ".names requires at least an output", ln );
      names_def d;
      d.inputs.assign( toks.begin() + 1, toks.end() - 1 );
      d.output = toks.back();
      d.line = ln;
      while ( pos < lines.size() && lines[pos].first[lines[pos].first.find_first_not_of( " \t" )] != '.' )
      {
        auto rt = tokens_of( lines[pos].first );
        uint64_t rl = lines[pos].second;
        ++pos;
        std::string cube;
        char value;
        if ( d.inputs.empty() )
        {
          if ( rt.size() != 1 || rt[0].size() != 1 )
            throw parse_error( "constant cover row must be a single 0/1", rl );
          cube = "";
          value = rt[0][0];
        }
        else
        {
          if ( rt.size() != 2 || rt[0].size() != d.inputs.size() || rt[1].size() != 1 )
            throw parse_error( "cover row must be '<cube> <value>'", rl );
          cube = rt[0];
          value = rt[1][0];
        }
        if ( value != '0' && value != '1' )
          throw parse_error( "cover value must be 0 or 1", rl );
        for ( char c : cube )
          if ( c != '0' && c != '1' && c != '-' )
            throw parse_error( "cube character must be 0, 1 or -", rl );
        d.cubes.push_back( cube );
        d.values.push_back( value );
      }
      defs.push_back( std::move( d ) );
    }
    else if ( cmd == ".end" )
    {
      break;
    }
    else
    {
      throw parse_error( "unsupported construct '" + cmd + "'", ln );
    }
  }

  if ( !saw_model )
    throw parse_error( "missing .model" );

  mig result( static_cast<uint32_t>( input_names.size() ) );
  result.pi_names() = input_names;

  std::unordered_map<std::string, signal> sig_of;
  std::unordered_map<std::string, size_t> def_of;
  for ( size_t i = 0; i < input_names.size(); ++i )
    if ( !sig_of.emplace( input_names[i], result.pi( static_cast<uint32_t>( i ) ) ).second )
      throw parse_error( "duplicate input name '" + input_names[i] + "'" );
  for ( size_t i = 0; i < defs.size(); ++i )
    if ( sig_of.count( defs[i].output ) || !def_of.emplace( defs[i].output, i ).second )
      throw parse_error( "signal '" + defs[i].output + "' defined twice", defs[i].line );

  std::unordered_map<std::string, uint8_t> state;
  auto resolve = [&]( auto&& self, std::string const& name ) -> signal {
    if ( auto it = sig_of.find( name ); it != sig_of.end() )
      return it->second;
    auto dit = def_of.find( name );
    if ( dit == def_of.end() )
      throw parse_error( "signal '" + name + "' is used but never defined" );
    auto const& d = defs[dit->second];
    if ( state[name] == 1 )
      throw parse_error( "combinational cycle through '" + name + "'", d.line );
    state[name] = 1;

    std::vector<signal> ins;
    ins.reserve( d.inputs.size() );
    for ( auto const& i : d.inputs )
      ins.push_back( self( self, i ) );

    bool phase_known = false;
    bool on_phase = true;
    signal sum = const0;
    for ( size_t r = 0; r < d.cubes.size(); ++r )
    {
      bool row_on = d.values[r] == '1';
      if ( phase_known && row_on != on_phase )
        throw parse_error( "mixed cover phases in one .names", d.line );
      phase_known = true;
      on_phase = row_on;
      signal product = const1;
      for ( size_t i = 0; i < d.cubes[r].size(); ++i )
      {
        if ( d.cubes[r][i] == '-' )
          continue;
        product = result.make_and( product, ins[i] ^ ( d.cubes[r][i] == '0' ) );
      }
      sum = result.make_or( sum, product );
    }
    signal f = phase_known && !on_phase ? !sum : sum;
    state[name] = 2;
    sig_of.emplace( name, f );
    return f;
  };

  for ( auto const& o : output_names )
    result.create_po( resolve( resolve, o ) );
  result.po_names() = output_names;
  return result;
}

inline mig parse_blif( std::string const& text )
{
  std::istringstream ss( text );
  return parse_blif( ss );
}

/*! \brief Writes a `mig` in canonical BLIF form */
inline void write_blif( mig const& m, std::ostream& out )
{
  /* gate order = the parser's allocation order: outputs left to right, each
     cone in depth-first postorder over the printed fanin sequence */
  std::vector<uint32_t> order;
  std::vector<uint32_t> name_index( m.size(), 0 );
  auto dfs = [&]( auto&& self, uint32_t n ) -> void {
    if ( !m.is_gate( n ) || name_index[n] != 0 )
      return;
    name_index[n] = 1; /* discovered; fanin ids are strictly smaller, no cycles */
    for ( auto const& f : m.fanins( n ) )
      self( self, f.node() );
    order.push_back( n );
    name_index[n] = static_cast<uint32_t>( order.size() );
  };
  for ( auto const& po : m.pos() )
    dfs( dfs, po.node() );

  auto name_of = [&]( uint32_t n ) -> std::string {
    if ( m.is_pi( n ) )
    {
      if ( n - 1 < m.pi_names().size() && !m.pi_names()[n - 1].empty() )
        return m.pi_names()[n - 1];
      return "pi" + std::to_string( n - 1 );
    }
    return "n" + std::to_string( name_index[n] );
  };
  auto po_name = [&]( uint32_t k ) -> std::string {
    if ( k < m.po_names().size() && !m.po_names()[k].empty() )
      return m.po_names()[k];
    return "po" + std::to_string( k );
  };

  out << ".model mig\n";
  out << ".inputs";
  for ( uint32_t i = 0; i < m.num_pis(); ++i )
    out << ' ' << name_of( 1 + i );
  out << "\n.outputs";
  for ( uint32_t k = 0; k < m.num_pos(); ++k )
    out << ' ' << po_name( k );
  out << '\n';

  for ( uint32_t n : order )
  {
    auto const& f = m.fanins( n );
    /* at most one constant fanin can survive construction */
    int const_pos = -1;
    for ( int i = 0; i < 3; ++i )
      if ( m.is_constant( f[i].node() ) )
        const_pos = i;
    if ( const_pos >= 0 )
    {
      signal x = f[( const_pos + 1 ) % 3], y = f[( const_pos + 2 ) % 3];
      if ( ( const_pos + 1 ) % 3 > ( const_pos + 2 ) % 3 )
        std::swap( x, y );
      out << ".names " << name_of( x.node() ) << ' ' << name_of( y.node() ) << ' ' << name_of( n ) << '\n';
      char px = x.complemented() ? '0' : '1';
      char py = y.complemented() ? '0' : '1';
      if ( f[const_pos] == const0 ) /* AND */
        out << px << py << " 1\n";
      else /* OR */
        out << px << "- 1\n-" << py << " 1\n";
    }
    else
    {
      out << ".names " << name_of( f[0].node() ) << ' ' << name_of( f[1].node() ) << ' '
          << name_of( f[2].node() ) << ' ' << name_of( n ) << '\n';
      char p[3];
      for ( int i = 0; i < 3; ++i )
        p[i] = f[i].complemented() ? '0' : '1';
      out << p[0] << p[1] << "- 1\n" << p[0] << '-' << p[2] << " 1\n-" << p[1] << p[2] << " 1\n";
    }
  }

  for ( uint32_t k = 0; k < m.num_pos(); ++k )
  {
    auto po = m.po( k );
    out << ".names ";
    if ( m.is_constant( po.node() ) )
    {
      out << po_name( k ) << '\n';
      if ( po.complemented() )
        out << "1\n";
    }
    else
    {
      out << name_of( po.node() ) << ' ' << po_name( k ) << '\n';
      out << ( po.complemented() ? '0' : '1' ) << " 1\n";
    }
  }
  out << ".end\n";
}

inline std::string write_blif( mig const& m )
{
  std::ostringstream ss;
  write_blif( m, ss );
  return ss.str();
}

} // namespace migdse
