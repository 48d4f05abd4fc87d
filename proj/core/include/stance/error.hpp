#pragma once

#include <stdexcept>
#include <string>

namespace stance {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message carries the file and line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(format(file, line, what)), file_(file), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& file, std::size_t line,
                            const std::string& what) {
    std::string msg = file.empty() ? std::string("<input>") : file;
    if (line > 0) msg += ":" + std::to_string(line);
    return msg + ": " + what;
  }

  std::string file_;
  std::size_t line_;
};

}  // namespace stance
