#pragma once

#include <stdexcept>
#include <string>

namespace geri {

// Base for everything this library throws on bad user input.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file; message carries "path:line: reason".
class parse_error : public error {
 public:
  parse_error(const std::string& path, std::size_t line, const std::string& reason)
      : error(path + ":" + std::to_string(line) + ": " + reason) {}
};

// Structurally invalid data (self-loop, duplicate edge, id out of range, ...).
class validation_error : public error {
 public:
  explicit validation_error(const std::string& msg) : error(msg) {}
};

}  // namespace geri
