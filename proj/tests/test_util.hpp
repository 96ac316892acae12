#ifndef HTNKIT_TEST_UTIL_HPP
#define HTNKIT_TEST_UTIL_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string suite_path(const std::string& rel) {
  return std::string(HTNKIT_SUITES_DIR) + "/" + rel;
}

#endif
