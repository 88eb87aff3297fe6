#include <bemrelax/study.hpp>

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bemrelax::study {

namespace {

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& key) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("report: bad number for '" + key + "': " + s);
  return v;
}

long long parse_int(const std::string& s, const std::string& key) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("report: bad integer for '" + key + "': " + s);
  return v;
}

}  // namespace

void StudyReport::write(std::ostream& out) const {
  out << "kind = " << kind << '\n';
  for (const auto& [k, v] : notes) out << "note." << k << " = " << v << '\n';
  for (const auto& [k, v] : derived) out << "derived." << k << " = " << fmt(v) << '\n';
  out << "run.count = " << runs.size() << '\n';
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    const std::string p = "run." + std::to_string(i) + ".";
    out << p << "label = " << r.label << '\n'
        << p << "panels = " << r.panels << '\n'
        << p << "n_crit = " << r.n_crit << '\n'
        << p << "p_initial = " << r.p_initial << '\n'
        << p << "p_min = " << r.p_min << '\n'
        << p << "relax = " << (r.relax ? 1 : 0) << '\n'
        << p << "tol = " << fmt(r.tol) << '\n'
        << p << "iterations = " << r.iterations << '\n'
        << p << "converged = " << (r.converged ? 1 : 0) << '\n'
        << p << "repeats = " << r.repeats << '\n'
        << p << "seconds_mean = " << fmt(r.seconds_mean) << '\n'
        << p << "seconds_min = " << fmt(r.seconds_min) << '\n'
        << p << "seconds_max = " << fmt(r.seconds_max) << '\n'
        << p << "error = " << fmt(r.error) << '\n'
        << p << "value = " << fmt(r.value) << '\n';
  }
}

StudyReport StudyReport::read(std::istream& in) {
  StudyReport rep;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw std::runtime_error("report: malformed line: " + line);
    const std::string key = line.substr(0, eq), val = line.substr(eq + 3);
    if (key == "kind") {
      rep.kind = val;
    } else if (key.rfind("note.", 0) == 0) {
      rep.notes[key.substr(5)] = val;
    } else if (key.rfind("derived.", 0) == 0) {
      rep.derived[key.substr(8)] = parse_double(val, key);
    } else if (key == "run.count") {
      rep.runs.resize(static_cast<std::size_t>(parse_int(val, key)));
    } else if (key.rfind("run.", 0) == 0) {
      const auto dot = key.find('.', 4);
      if (dot == std::string::npos) throw std::runtime_error("report: malformed run key: " + key);
      const auto idx = static_cast<std::size_t>(parse_int(key.substr(4, dot - 4), key));
      if (idx >= rep.runs.size()) throw std::runtime_error("report: run index out of range: " + key);
      auto& r = rep.runs[idx];
      const std::string f = key.substr(dot + 1);
      if (f == "label") r.label = val;
      else if (f == "panels") r.panels = static_cast<std::size_t>(parse_int(val, key));
      else if (f == "n_crit") r.n_crit = static_cast<int>(parse_int(val, key));
      else if (f == "p_initial") r.p_initial = static_cast<int>(parse_int(val, key));
      else if (f == "p_min") r.p_min = static_cast<int>(parse_int(val, key));
      else if (f == "relax") r.relax = parse_int(val, key) != 0;
      else if (f == "tol") r.tol = parse_double(val, key);
      else if (f == "iterations") r.iterations = static_cast<int>(parse_int(val, key));
      else if (f == "converged") r.converged = parse_int(val, key) != 0;
      else if (f == "repeats") r.repeats = static_cast<int>(parse_int(val, key));
      else if (f == "seconds_mean") r.seconds_mean = parse_double(val, key);
      else if (f == "seconds_min") r.seconds_min = parse_double(val, key);
      else if (f == "seconds_max") r.seconds_max = parse_double(val, key);
      else if (f == "error") r.error = parse_double(val, key);
      else if (f == "value") r.value = parse_double(val, key);
      else throw std::runtime_error("report: unknown run field: " + key);
    } else {
      throw std::runtime_error("report: unknown key: " + key);
    }
  }
  return rep;
}

void StudyReport::write_csv(std::ostream& out) const {
  out << "label,panels,n_crit,p_initial,p_min,relax,tol,iterations,converged,repeats,seconds_mean,seconds_min,"
         "seconds_max,error,value\n";
  for (const auto& r : runs)
    out << r.label << ',' << r.panels << ',' << r.n_crit << ',' << r.p_initial << ',' << r.p_min << ','
        << (r.relax ? 1 : 0) << ',' << fmt(r.tol) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
        << r.repeats << ',' << fmt(r.seconds_mean) << ',' << fmt(r.seconds_min) << ',' << fmt(r.seconds_max) << ','
        << fmt(r.error) << ',' << fmt(r.value) << '\n';
}

}  // namespace bemrelax::study
