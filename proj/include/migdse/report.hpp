/*!
  \file report.hpp
  \brief Tabular and graphical output: RFC 4180 CSV and self-contained SVG

  Emitters are pure functions of their inputs — no timestamps, locales, or
  addresses leak into the bytes — so identical data always yields identical
  files. CSV fields are quoted exactly when they contain a comma, quote, or
  newline; embedded quotes are doubled. The SVG charts (a multi-series line
  chart and a grid heatmap) are deliberately small and dependency-free so
  sweep results can be eyeballed without a plotting stack.
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "common.hpp"
#include "eval.hpp"

namespace migdse
{

/*! \brief Quotes a CSV field if it contains a delimiter, quote, or newline */
inline std::string csv_field( std::string_view text )
{
  bool const needs_quotes = text.find_first_of( ",\"\r\n" ) != std::string_view::npos;
  if ( !needs_quotes )
    return std::string{ text };
  std::string out;
  out.reserve( text.size() + 2 );
  out.push_back( '"' );
  for ( char c : text )
  {
    if ( c == '"' )
      out.push_back( '"' );
    out.push_back( c );
  }
  out.push_back( '"' );
  return out;
}

/*! \brief Writes header and rows as CSV with CRLF-free line endings */
inline void emit_csv( std::vector<std::string> const& header,
                      std::vector<std::vector<std::string>> const& rows, std::ostream& os )
{
  auto write_row = [&]( std::vector<std::string> const& row ) {
    for ( size_t i = 0; i < row.size(); ++i )
    {
      if ( i > 0 )
        os << ',';
      os << csv_field( row[i] );
    }
    os << '\n';
  };
  write_row( header );
  for ( auto const& row : rows )
  {
    if ( row.size() != header.size() )
      throw error( "CSV row width does not match header" );
    write_row( row );
  }
}

/*! \brief Compact decimal rendering used in all emitted files */
inline std::string format_number( double v )
{
  if ( std::isnan( v ) )
    return "nan";
  return fmt::format( "{:.6g}", v );
}

/*! \brief temperature,target,fraction,speedup,runs,wilson_low,wilson_high */
inline void sweep_to_csv( std::vector<sweep_row> const& rows, std::ostream& os )
{
  std::vector<std::vector<std::string>> out;
  out.reserve( rows.size() );
  for ( auto const& r : rows )
  {
    out.push_back( { r.temperature, std::to_string( r.target ), format_number( r.fraction ),
                     format_number( r.ratio ), std::to_string( r.runs ),
                     format_number( r.interval.low ), format_number( r.interval.high ) } );
  }
  emit_csv( { "temperature", "target", "fraction", "speedup", "runs", "wilson_low", "wilson_high" },
            out, os );
}

/*! \brief chain_length,chains,runs,min,mean,median */
inline void grid_to_csv( std::vector<grid_cell> const& cells, std::ostream& os )
{
  std::vector<std::vector<std::string>> out;
  out.reserve( cells.size() );
  for ( auto const& c : cells )
  {
    out.push_back( { std::to_string( c.chain_length ), std::to_string( c.chains ),
                     std::to_string( c.runs ), std::to_string( c.min ), format_number( c.mean ),
                     format_number( c.median ) } );
  }
  emit_csv( { "chain_length", "chains", "runs", "min", "mean", "median" }, out, os );
}

/* ------------------------------------------------------------------ */
/* SVG                                                                 */
/* ------------------------------------------------------------------ */

/*! \brief One polyline of a line chart; x positions are categorical */
struct chart_series
{
  std::string label;
  std::vector<double> values; //!< one value per category, NaN skips the point
};

namespace detail
{

inline std::string svg_coord( double v )
{
  return fmt::format( "{:.2f}", v );
}

inline std::string xml_escape( std::string_view text )
{
  std::string out;
  out.reserve( text.size() );
  for ( char c : text )
  {
    switch ( c )
    {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out.push_back( c );
    }
  }
  return out;
}

inline std::string const& series_color( size_t index )
{
  static std::vector<std::string> const palette{
      "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f" };
  return palette[index % palette.size()];
}

} // namespace detail

/*! \brief Multi-series line chart over categorical x ticks */
inline std::string svg_line_chart( std::string_view title, std::string_view y_label,
                                   std::vector<std::string> const& x_ticks,
                                   std::vector<chart_series> const& series, uint32_t width = 640,
                                   uint32_t height = 400 )
{
  if ( x_ticks.empty() || series.empty() )
    throw error( "line chart needs at least one tick and one series" );
  for ( auto const& s : series )
  {
    if ( s.values.size() != x_ticks.size() )
      throw error( "line chart series length does not match tick count" );
  }

  double lo = 0.0, hi = 1.0;
  bool first = true;
  for ( auto const& s : series )
  {
    for ( double v : s.values )
    {
      if ( std::isnan( v ) )
        continue;
      if ( first )
      {
        lo = hi = v;
        first = false;
      }
      else
      {
        lo = std::min( lo, v );
        hi = std::max( hi, v );
      }
    }
  }
  if ( first )
    throw error( "line chart has no finite values" );
  if ( hi - lo < 1e-12 )
  {
    lo -= 1.0;
    hi += 1.0;
  }

  double const left = 60.0, right = 140.0, top = 40.0, bottom = 50.0;
  double const plot_w = static_cast<double>( width ) - left - right;
  double const plot_h = static_cast<double>( height ) - top - bottom;
  auto x_of = [&]( size_t i ) {
    return x_ticks.size() == 1
               ? left + plot_w / 2.0
               : left + plot_w * static_cast<double>( i ) / static_cast<double>( x_ticks.size() - 1 );
  };
  auto y_of = [&]( double v ) { return top + plot_h * ( 1.0 - ( v - lo ) / ( hi - lo ) ); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"14\">"
     << detail::xml_escape( title ) << "</text>\n";
  os << "<text x=\"16\" y=\"" << detail::svg_coord( top + plot_h / 2.0 )
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-90 16 "
     << detail::svg_coord( top + plot_h / 2.0 ) << ")\">" << detail::xml_escape( y_label )
     << "</text>\n";

  /* frame and horizontal gridlines with value labels */
  os << "<rect x=\"" << detail::svg_coord( left ) << "\" y=\"" << detail::svg_coord( top )
     << "\" width=\"" << detail::svg_coord( plot_w ) << "\" height=\"" << detail::svg_coord( plot_h )
     << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  for ( int g = 0; g <= 4; ++g )
  {
    double const v = lo + ( hi - lo ) * g / 4.0;
    double const y = y_of( v );
    os << "<line x1=\"" << detail::svg_coord( left ) << "\" y1=\"" << detail::svg_coord( y )
       << "\" x2=\"" << detail::svg_coord( left + plot_w ) << "\" y2=\"" << detail::svg_coord( y )
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << detail::svg_coord( left - 6.0 ) << "\" y=\"" << detail::svg_coord( y + 4.0 )
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << format_number( v )
       << "</text>\n";
  }
  for ( size_t i = 0; i < x_ticks.size(); ++i )
  {
    os << "<text x=\"" << detail::svg_coord( x_of( i ) ) << "\" y=\""
       << detail::svg_coord( top + plot_h + 18.0 )
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
       << detail::xml_escape( x_ticks[i] ) << "</text>\n";
  }

  for ( size_t s = 0; s < series.size(); ++s )
  {
    auto const& color = detail::series_color( s );
    std::string points;
    for ( size_t i = 0; i < series[s].values.size(); ++i )
    {
      double const v = series[s].values[i];
      if ( std::isnan( v ) )
        continue;
      if ( !points.empty() )
        points += ' ';
      points += detail::svg_coord( x_of( i ) ) + "," + detail::svg_coord( y_of( v ) );
      os << "<circle cx=\"" << detail::svg_coord( x_of( i ) ) << "\" cy=\""
         << detail::svg_coord( y_of( v ) ) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if ( !points.empty() )
      os << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.5\"/>\n";
    double const ly = top + 14.0 * static_cast<double>( s );
    os << "<rect x=\"" << detail::svg_coord( left + plot_w + 12.0 ) << "\" y=\""
       << detail::svg_coord( ly ) << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << detail::svg_coord( left + plot_w + 26.0 ) << "\" y=\""
       << detail::svg_coord( ly + 9.0 ) << "\" font-family=\"sans-serif\" font-size=\"10\">"
       << detail::xml_escape( series[s].label ) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/*! \brief Heatmap over a dense (rows × cols) value matrix; NaN cells are blank */
inline std::string svg_heatmap( std::string_view title, std::string_view x_label,
                                std::string_view y_label, std::vector<std::string> const& x_ticks,
                                std::vector<std::string> const& y_ticks,
                                std::vector<double> const& values, uint32_t cell = 56 )
{
  if ( x_ticks.empty() || y_ticks.empty() )
    throw error( "heatmap needs at least one row and one column" );
  if ( values.size() != x_ticks.size() * y_ticks.size() )
    throw error( "heatmap value count does not match grid shape" );

  double lo = 0.0, hi = 1.0;
  bool first = true;
  for ( double v : values )
  {
    if ( std::isnan( v ) )
      continue;
    if ( first )
    {
      lo = hi = v;
      first = false;
    }
    else
    {
      lo = std::min( lo, v );
      hi = std::max( hi, v );
    }
  }
  if ( first )
    throw error( "heatmap has no finite values" );
  double const span = hi - lo < 1e-12 ? 1.0 : hi - lo;

  double const left = 90.0, top = 60.0;
  uint32_t const width = static_cast<uint32_t>( left ) + cell * static_cast<uint32_t>( x_ticks.size() ) + 30;
  uint32_t const height = static_cast<uint32_t>( top ) + cell * static_cast<uint32_t>( y_ticks.size() ) + 50;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"14\">"
     << detail::xml_escape( title ) << "</text>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
     << detail::xml_escape( x_label ) << "</text>\n";
  os << "<text x=\"18\" y=\"" << detail::svg_coord( top + cell * y_ticks.size() / 2.0 )
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-90 18 "
     << detail::svg_coord( top + cell * y_ticks.size() / 2.0 ) << ")\">"
     << detail::xml_escape( y_label ) << "</text>\n";

  for ( size_t row = 0; row < y_ticks.size(); ++row )
  {
    os << "<text x=\"" << detail::svg_coord( left - 8.0 ) << "\" y=\""
       << detail::svg_coord( top + cell * ( row + 0.5 ) + 4.0 )
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
       << detail::xml_escape( y_ticks[row] ) << "</text>\n";
    for ( size_t col = 0; col < x_ticks.size(); ++col )
    {
      double const x = left + cell * static_cast<double>( col );
      double const y = top + cell * static_cast<double>( row );
      double const v = values[row * x_ticks.size() + col];
      if ( std::isnan( v ) )
      {
        os << "<rect x=\"" << detail::svg_coord( x ) << "\" y=\"" << detail::svg_coord( y )
           << "\" width=\"" << cell << "\" height=\"" << cell
           << "\" fill=\"#f0f0f0\" stroke=\"#ffffff\"/>\n";
        continue;
      }
      /* light (high values) to saturated blue (low = better) */
      double const u = ( v - lo ) / span;
      int const r = static_cast<int>( std::lround( 40.0 + 200.0 * u ) );
      int const g = static_cast<int>( std::lround( 80.0 + 160.0 * u ) );
      int const b = 220;
      os << "<rect x=\"" << detail::svg_coord( x ) << "\" y=\"" << detail::svg_coord( y )
         << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
         << fmt::format( "#{:02x}{:02x}{:02x}", r, g, b ) << "\" stroke=\"#ffffff\"/>\n";
      os << "<text x=\"" << detail::svg_coord( x + cell / 2.0 ) << "\" y=\""
         << detail::svg_coord( y + cell / 2.0 + 4.0 )
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
         << format_number( v ) << "</text>\n";
    }
  }
  for ( size_t col = 0; col < x_ticks.size(); ++col )
  {
    os << "<text x=\"" << detail::svg_coord( left + cell * ( col + 0.5 ) ) << "\" y=\""
       << detail::svg_coord( top - 8.0 )
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
       << detail::xml_escape( x_ticks[col] ) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/*! \brief Speedup-vs-temperature chart, one series per target value */
inline std::string sweep_to_svg( std::vector<sweep_row> const& rows )
{
  std::vector<std::string> ticks;
  std::vector<int64_t> targets;
  for ( auto const& r : rows )
  {
    if ( std::find( ticks.begin(), ticks.end(), r.temperature ) == ticks.end() )
      ticks.push_back( r.temperature );
    if ( std::find( targets.begin(), targets.end(), r.target ) == targets.end() )
      targets.push_back( r.target );
  }
  std::vector<chart_series> series;
  for ( auto target : targets )
  {
    chart_series s;
    s.label = "target " + std::to_string( target );
    s.values.assign( ticks.size(), std::nan( "" ) );
    for ( auto const& r : rows )
    {
      if ( r.target != target )
        continue;
      auto const it = std::find( ticks.begin(), ticks.end(), r.temperature );
      s.values[static_cast<size_t>( it - ticks.begin() )] = r.ratio;
    }
    series.push_back( std::move( s ) );
  }
  return svg_line_chart( "speedup vs sampling temperature", "speedup", ticks, series );
}

/*! \brief Mean-best heatmap of the restart-structure grid */
inline std::string grid_to_svg( std::vector<grid_cell> const& cells )
{
  std::vector<uint32_t> lengths, counts;
  for ( auto const& c : cells )
  {
    if ( std::find( lengths.begin(), lengths.end(), c.chain_length ) == lengths.end() )
      lengths.push_back( c.chain_length );
    if ( std::find( counts.begin(), counts.end(), c.chains ) == counts.end() )
      counts.push_back( c.chains );
  }
  std::sort( lengths.begin(), lengths.end() );
  std::sort( counts.begin(), counts.end() );
  std::vector<double> values( lengths.size() * counts.size(), std::nan( "" ) );
  for ( auto const& c : cells )
  {
    size_t const row = static_cast<size_t>(
        std::find( lengths.begin(), lengths.end(), c.chain_length ) - lengths.begin() );
    size_t const col =
        static_cast<size_t>( std::find( counts.begin(), counts.end(), c.chains ) - counts.begin() );
    values[row * counts.size() + col] = c.mean;
  }
  std::vector<std::string> x_ticks, y_ticks;
  for ( auto c : counts )
    x_ticks.push_back( std::to_string( c ) );
  for ( auto l : lengths )
    y_ticks.push_back( std::to_string( l ) );
  return svg_heatmap( "mean best value per restart structure", "parallel chains", "chain length",
                      x_ticks, y_ticks, values );
}

} // namespace migdse
