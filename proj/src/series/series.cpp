#include "papseries/series/series.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace papseries {

ExactSeries ExactSeries::prefix(std::size_t count) const {
  ExactSeries s;
  s.name = name;
  s.oeis = oeis;
  s.offset = offset;
  s.coeffs.assign(coeffs.begin(), coeffs.begin() + static_cast<long>(std::min(count, coeffs.size())));
  return s;
}

const HPFloat& EstimatorSeq::at(long index) const {
  auto it = std::lower_bound(n.begin(), n.end(), index);
  if (it == n.end() || *it != index) {
    throw std::out_of_range(label + ": no value at n=" + std::to_string(index));
  }
  return values[static_cast<std::size_t>(it - n.begin())];
}

bool EstimatorSeq::has(long index) const { return std::binary_search(n.begin(), n.end(), index); }

EstimatorSeq EstimatorSeq::window(long lo, long hi) const {
  EstimatorSeq out;
  out.label = label;
  out.abscissa_exponent = abscissa_exponent;
  out.first_predicted = first_predicted;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < lo || n[i] > hi) continue;
    out.n.push_back(n[i]);
    out.values.push_back(values[i]);
    if (!errors.empty()) out.errors.push_back(errors[i]);
  }
  return out;
}

void EstimatorSeq::push(long index, HPFloat value) {
  if (!n.empty() && index <= n.back()) throw std::invalid_argument(label + ": indices must increase");
  n.push_back(index);
  values.push_back(std::move(value));
  if (!errors.empty()) errors.emplace_back(values.back().precision());
}

void EstimatorSeq::push(long index, HPFloat value, HPFloat error) {
  if (!n.empty() && index <= n.back()) throw std::invalid_argument(label + ": indices must increase");
  while (errors.size() < values.size()) errors.emplace_back(values[errors.size()].precision());
  n.push_back(index);
  values.push_back(std::move(value));
  errors.push_back(std::move(error));
}

EstimatorSeq ratios(const ExactSeries& s, Precision prec) {
  if (s.coeffs.size() < 2) throw std::invalid_argument(s.name + ": need at least two coefficients for ratios");
  EstimatorSeq r;
  r.label = "r";
  for (std::size_t i = 1; i < s.coeffs.size(); ++i) {
    if (s.coeffs[i - 1] == 0) {
      throw std::domain_error(s.name + ": zero coefficient at n=" + std::to_string(s.offset + static_cast<int>(i) - 1));
    }
    r.push(s.offset + static_cast<long>(i), HPFloat(BigRational(s.coeffs[i], s.coeffs[i - 1]), prec));
  }
  long n = s.last_exact_index();
  if (!s.tail_ratios.empty()) {
    r.first_predicted = n + 1;
    for (const auto& p : s.tail_ratios) r.push(++n, p.value.with_precision(prec), p.uncertainty.with_precision(prec));
  } else if (!s.tail.empty()) {
    r.first_predicted = n + 1;
    HPFloat prev(s.coeffs.back(), prec);
    HPFloat prev_err(prec);
    for (const auto& p : s.tail) {
      if (prev.is_zero()) throw std::domain_error(s.name + ": zero predicted coefficient");
      HPFloat value = p.value.with_precision(prec) / prev;
      HPFloat rel = abs(p.uncertainty / p.value) + abs(prev_err / prev);
      r.push(++n, value, abs(value) * rel);
      prev = p.value.with_precision(prec);
      prev_err = p.uncertainty.with_precision(prec);
    }
  }
  return r;
}

EstimatorSeq ratios(const RationalSeries& s, Precision prec) {
  if (s.coeffs.size() < 2) throw std::invalid_argument(s.name + ": need at least two coefficients for ratios");
  EstimatorSeq r;
  r.label = "r";
  for (std::size_t i = 1; i < s.coeffs.size(); ++i) {
    if (sgn(s.coeffs[i - 1]) == 0) {
      throw std::domain_error(s.name + ": zero coefficient at n=" + std::to_string(s.offset + static_cast<int>(i) - 1));
    }
    BigRational q = s.coeffs[i] / s.coeffs[i - 1];
    q.canonicalize();
    r.push(s.offset + static_cast<long>(i), HPFloat(q, prec));
  }
  return r;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

ExactSeries ingest_bfile(std::string_view text, std::string name) {
  ExactSeries s;
  s.name = std::move(name);
  int line_no = 0;
  long expected = 0;
  bool first = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t split = line.find_first_of(" \t");
    if (split == std::string_view::npos) throw ParseError(line_no, "expected 'index value'");
    const std::string_view index_text = line.substr(0, split);
    const std::string_view value_text = trim(line.substr(split));
    if (!is_integer(index_text) || !is_integer(value_text)) throw ParseError(line_no, "malformed line '" + std::string(line) + "'");
    const long index = std::stol(std::string(index_text));
    if (first) {
      s.offset = static_cast<int>(index);
      expected = index;
      first = false;
    }
    if (index < expected) throw ParseError(line_no, "index " + std::to_string(index) + " is not increasing");
    if (index > expected) throw ParseError(line_no, "gap: expected index " + std::to_string(expected));
    std::string v(value_text);
    if (v.front() == '+') v.erase(0, 1);
    s.coeffs.emplace_back(v);
    ++expected;
  }
  if (s.coeffs.empty()) throw ParseError(line_no, "no data lines");
  return s;
}

ExactSeries ingest_bfile_path(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto slash = path.find_last_of('/');
  return ingest_bfile(buf.str(), path.substr(slash == std::string::npos ? 0 : slash + 1));
}

std::string export_series(const ExactSeries& s, SeriesFormat format) {
  std::ostringstream os;
  switch (format) {
    case SeriesFormat::BFile:
      for (std::size_t i = 0; i < s.coeffs.size(); ++i) os << s.offset + static_cast<long>(i) << ' ' << s.coeffs[i] << '\n';
      break;
    case SeriesFormat::Csv: {
      os << "n,coefficient,is_predicted,uncertainty\n";
      long n = s.offset;
      for (const auto& c : s.coeffs) os << n++ << ',' << c << ",0,0\n";
      for (const auto& p : s.tail) {
        os << n++ << ',' << p.value.to_string(p.value.precision().digits) << ",1,"
           << p.uncertainty.to_string(6) << '\n';
      }
      break;
    }
    case SeriesFormat::Json: {
      nlohmann::ordered_json j;
      j["name"] = s.name;
      j["oeis"] = s.oeis;
      j["offset"] = s.offset;
      auto& coeffs = j["coefficients"] = nlohmann::json::array();
      for (const auto& c : s.coeffs) coeffs.push_back(c.get_str());
      auto dump = [](const std::vector<Predicted>& v, long first) {
        nlohmann::ordered_json a = nlohmann::json::array();
        for (const auto& p : v) {
          a.push_back({{"n", first++},
                       {"value", p.value.to_string()},
                       {"uncertainty", p.uncertainty.to_string(8)},
                       {"digits", p.value.precision().digits}});
        }
        return a;
      };
      j["predicted"] = dump(s.tail, s.last_exact_index() + 1);
      j["predicted_ratios"] = dump(s.tail_ratios, s.last_exact_index() + 1);
      os << j.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

std::string export_series(const RationalSeries& s, SeriesFormat format) {
  std::ostringstream os;
  long n = s.offset;
  switch (format) {
    case SeriesFormat::BFile:
      for (const auto& c : s.coeffs) os << n++ << ' ' << c.get_str() << '\n';
      break;
    case SeriesFormat::Csv:
      os << "n,coefficient,is_predicted,uncertainty\n";
      for (const auto& c : s.coeffs) os << n++ << ',' << c.get_str() << ",0,0\n";
      break;
    case SeriesFormat::Json: {
      nlohmann::ordered_json j;
      j["name"] = s.name;
      j["offset"] = s.offset;
      auto& coeffs = j["coefficients"] = nlohmann::json::array();
      for (const auto& c : s.coeffs) coeffs.push_back(c.get_str());
      os << j.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

ExactSeries ingest_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  ExactSeries s;
  s.name = j.value("name", "");
  s.oeis = j.value("oeis", "");
  s.offset = j.value("offset", 0);
  for (const auto& c : j.at("coefficients")) s.coeffs.emplace_back(c.get<std::string>());
  auto load = [](const nlohmann::json& a, std::vector<Predicted>& out) {
    for (const auto& p : a) {
      const Precision prec{p.value("digits", kDefaultDigits)};
      out.push_back({HPFloat(p.at("value").get<std::string>(), prec), HPFloat(p.at("uncertainty").get<std::string>(), prec)});
    }
  };
  if (j.contains("predicted")) load(j["predicted"], s.tail);
  if (j.contains("predicted_ratios")) load(j["predicted_ratios"], s.tail_ratios);
  return s;
}

}  // namespace papseries
