#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gelfand/error.hpp"
#include "gelfand/io.hpp"

using namespace gelfand;

TEST_SUITE("io") {

TEST_CASE("key = value parsing") {
  std::stringstream in("# comment\n n = 3\nT=25.5 # trailing\n\nout = a b\n");
  const auto kv = io::KeyValue::parse(in);
  CHECK(kv.get_int("n") == 3);
  CHECK(kv.get_double("T") == 25.5);
  CHECK(kv.get("out") == "a b");
  CHECK_FALSE(kv.contains("m"));
  CHECK_THROWS_AS(kv.get("m"), DomainError);
  CHECK_THROWS_AS(kv.get_int("T"), DomainError);

  std::stringstream bad("just words\n");
  CHECK_THROWS_AS(io::KeyValue::parse(bad), DomainError);
}

TEST_CASE("write keeps insertion order and round-trips doubles") {
  io::KeyValue kv;
  kv.set("b", 0.1 + 0.2);
  kv.set("a", 7);
  kv.set("flag", true);
  kv.set("b", 1.0 / 3.0);
  std::stringstream ss;
  kv.write(ss);
  CHECK(ss.str().rfind("b = ", 0) == 0);
  const auto back = io::KeyValue::parse(ss);
  CHECK(back.get_double("b") == 1.0 / 3.0);
  CHECK(back.get("flag") == "true");
  CHECK(back.entries().size() == 3);
}

TEST_CASE("atomic write replaces the file in one step") {
  const auto dir = std::filesystem::temp_directory_path() / "gelfand_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "x.txt";
  io::write_atomic(path, [](std::ostream& os) { os << "first\n"; });
  io::write_atomic(path, [](std::ostream& os) { os << "second\n"; });
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS(io::write_atomic(dir / "missing" / "y.txt", [](std::ostream&) {}));
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
