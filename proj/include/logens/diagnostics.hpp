#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace logens {

using WarningHandler = std::function<void(std::string_view)>;

// Non-fatal conditions (degenerate bins, skipped periods, ...) are routed
// through a process-wide handler. The default writes to stderr.
void warn(std::string_view message);

/// Installs `handler` and returns the previous one.
WarningHandler set_warning_handler(WarningHandler handler);

/// RAII capture of warnings, used mostly by tests.
class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(std::string_view needle) const;

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace logens
