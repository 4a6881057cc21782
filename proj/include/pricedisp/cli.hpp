#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace pricedisp::cli {

enum ExitCode : int {
  kOk = 0,
  kAnalysisError = 1,
  kUsageError = 2,
  kVerificationFailed = 3,
};

// Runs one subcommand. args excludes the program name. Diagnostics go to
// err; data goes only to files under --out. On failure every file the
// command wrote is removed again.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Files written by one command. Unless commit() is called, the destructor
// deletes them and the output directory if this command created it.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  const std::filesystem::path& dir() const { return dir_; }

  // Opens dir/name for writing and records it. Throws Error on I/O failure.
  std::filesystem::path claim(const std::string& name);
  void commit() { committed_ = true; }

 private:
  std::filesystem::path dir_;
  bool created_dir_ = false;
  bool committed_ = false;
  std::vector<std::filesystem::path> written_;
};

}  // namespace pricedisp::cli
