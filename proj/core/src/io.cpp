#include "gelfand/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "gelfand/error.hpp"
#include "gelfand/numeric.hpp"

namespace gelfand::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void KeyValue::set(const std::string& key, const std::string& value) {
  if (key.empty() || key.find('=') != std::string::npos) {
    throw DomainError("invalid key '" + key + "'");
  }
  auto it = index_.find(key);
  if (it != index_.end()) {
    entries_[it->second].second = value;
    return;
  }
  index_[key] = entries_.size();
  entries_.emplace_back(key, value);
}

void KeyValue::set(const std::string& key, double value) {
  set(key, numeric::format_double(value));
}

void KeyValue::set(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

bool KeyValue::contains(const std::string& key) const { return index_.count(key) != 0; }

const std::string& KeyValue::get(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) throw DomainError("missing key '" + key + "'");
  return entries_[it->second].second;
}

double KeyValue::get_double(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw DomainError("key '" + key + "': not a number: '" + v + "'");
  }
}

long long KeyValue::get_int(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw DomainError("key '" + key + "': not an integer: '" + v + "'");
  }
}

void KeyValue::write(std::ostream& os) const {
  for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
}

KeyValue KeyValue::parse(std::istream& is) {
  KeyValue kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw DomainError("line " + std::to_string(lineno) + ": empty key");
    kv.set(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValue KeyValue::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path.string());
  return parse(in);
}

void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

}  // namespace gelfand::io
