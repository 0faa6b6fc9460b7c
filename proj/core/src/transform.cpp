#include "gelfand/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gelfand/error.hpp"
#include "gelfand/numeric.hpp"

namespace gelfand::transform {

LogProfile::LogProfile(std::vector<LogSample> samples) : samples_(std::move(samples)) {
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].t > samples_[i - 1].t)) {
      throw DomainError("LogProfile: t grid must be strictly increasing");
    }
  }
}

double LogProfile::t_min() const {
  if (samples_.empty()) throw DomainError("LogProfile: empty profile");
  return samples_.front().t;
}

double LogProfile::t_max() const {
  if (samples_.empty()) throw DomainError("LogProfile: empty profile");
  return samples_.back().t;
}

bool LogProfile::covers(double t) const {
  return !samples_.empty() && t >= samples_.front().t && t <= samples_.back().t;
}

std::size_t LogProfile::locate(double t) const {
  if (!covers(t)) {
    throw DomainError("LogProfile: t = " + numeric::format_double(t) +
                      " outside grid");
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const LogSample& s) { return v < s.t; });
  std::size_t i = static_cast<std::size_t>(it - samples_.begin());
  if (i == 0) return 0;
  if (i >= samples_.size()) return samples_.size() - 2;
  return i - 1;
}

// Fritsch-Carlson slope for w_t at node i (three-point harmonic mean).
double LogProfile::pchip_slope(std::size_t i) const {
  const std::size_t n = samples_.size();
  auto secant = [&](std::size_t k) {
    return (samples_[k + 1].w_t - samples_[k].w_t) / (samples_[k + 1].t - samples_[k].t);
  };
  if (n < 3) return secant(0);
  if (i == 0) return secant(0);
  if (i == n - 1) return secant(n - 2);
  const double d0 = secant(i - 1);
  const double d1 = secant(i);
  if (d0 * d1 <= 0.0) return 0.0;
  const double h0 = samples_[i].t - samples_[i - 1].t;
  const double h1 = samples_[i + 1].t - samples_[i].t;
  const double w1 = 2.0 * h1 + h0;
  const double w2 = h1 + 2.0 * h0;
  return (w1 + w2) / (w1 / d0 + w2 / d1);
}

LogSample LogProfile::at(double t) const {
  if (samples_.size() == 1) {
    if (t == samples_[0].t) return samples_[0];
    throw DomainError("LogProfile: t outside grid");
  }
  const std::size_t i = locate(t);
  const LogSample& a = samples_[i];
  const LogSample& b = samples_[i + 1];
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  const double w = h00 * a.w + h10 * h * a.w_t + h01 * b.w + h11 * h * b.w_t;
  const double wt = h00 * a.w_t + h10 * h * pchip_slope(i) + h01 * b.w_t +
                    h11 * h * pchip_slope(i + 1);
  return {t, w, wt};
}

LogProfile LogProfile::slice(double lo, double hi) const {
  std::vector<LogSample> out;
  for (const auto& s : samples_) {
    if (s.t >= lo && s.t <= hi) out.push_back(s);
  }
  return LogProfile(std::move(out));
}

std::vector<double> LogProfile::t_values() const {
  std::vector<double> v(samples_.size());
  std::transform(samples_.begin(), samples_.end(), v.begin(), [](auto& s) { return s.t; });
  return v;
}

std::vector<double> LogProfile::w_values() const {
  std::vector<double> v(samples_.size());
  std::transform(samples_.begin(), samples_.end(), v.begin(), [](auto& s) { return s.w; });
  return v;
}

std::vector<double> LogProfile::w_t_values() const {
  std::vector<double> v(samples_.size());
  std::transform(samples_.begin(), samples_.end(), v.begin(), [](auto& s) { return s.w_t; });
  return v;
}

LogProfile radial_to_log(const RadialProfile& p) {
  if (!(p.lambda > 0.0)) throw DomainError("radial_to_log: lambda must be positive");
  const double half_log_lambda = 0.5 * std::log(p.lambda);
  std::vector<LogSample> out;
  out.reserve(p.samples.size());
  for (const auto& s : p.samples) {
    if (!(s.r > 0.0)) throw DomainError("radial_to_log: radius must be positive");
    out.push_back({-std::log(s.r) - half_log_lambda, s.u, -s.r * s.u_r});
  }
  if (out.size() >= 2 && out.front().t > out.back().t) std::reverse(out.begin(), out.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i].t > out[i - 1].t)) {
      throw DomainError("radial_to_log: radii must be strictly monotone");
    }
  }
  return LogProfile(std::move(out));
}

RadialProfile log_to_radial(const LogProfile& p, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("log_to_radial: lambda must be positive");
  const double half_log_lambda = 0.5 * std::log(lambda);
  RadialProfile out;
  out.lambda = lambda;
  out.samples.reserve(p.size());
  for (const auto& s : p.samples()) {
    const double r = std::exp(-s.t - half_log_lambda);
    out.samples.push_back({r, s.w, -s.w_t / r});
  }
  return out;
}

double gradient_magnitude(const LogProfile& p, double lambda, double r) {
  if (!(lambda > 0.0)) throw DomainError("gradient_magnitude: lambda must be positive");
  if (!(r > 0.0)) throw DomainError("gradient_magnitude: radius must be positive");
  const double t = -std::log(r);
  if (!p.covers(t)) throw DomainError("gradient_magnitude: radius outside grid");
  return std::abs(p.at(t).w_t) / r;
}

namespace {

std::vector<std::array<double, 3>> read_triples(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("profile CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw DomainError("profile CSV: expected header '" + header + "', got '" + line + "'");
  }
  std::vector<std::array<double, 3>> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::array<double, 3> row{};
    std::istringstream ss(line);
    std::string cell;
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(ss, cell, ',')) {
        throw DomainError("profile CSV: short row at line " + std::to_string(lineno));
      }
      try {
        std::size_t pos = 0;
        row[k] = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw DomainError("profile CSV: bad number at line " + std::to_string(lineno));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void write_csv(std::ostream& os, const LogProfile& p) {
  os << "t,w,w_t\n";
  for (const auto& s : p.samples()) {
    os << numeric::format_double(s.t) << ',' << numeric::format_double(s.w) << ','
       << numeric::format_double(s.w_t) << '\n';
  }
}

void write_csv(std::ostream& os, const RadialProfile& p) {
  os << "r,u,u_r\n";
  for (const auto& s : p.samples) {
    os << numeric::format_double(s.r) << ',' << numeric::format_double(s.u) << ','
       << numeric::format_double(s.u_r) << '\n';
  }
}

LogProfile read_log_profile_csv(std::istream& is) {
  std::vector<LogSample> out;
  for (const auto& row : read_triples(is, "t,w,w_t")) out.push_back({row[0], row[1], row[2]});
  return LogProfile(std::move(out));
}

RadialProfile read_radial_profile_csv(std::istream& is, double lambda) {
  RadialProfile out;
  out.lambda = lambda;
  for (const auto& row : read_triples(is, "r,u,u_r")) {
    out.samples.push_back({row[0], row[1], row[2]});
  }
  return out;
}

}  // namespace gelfand::transform
