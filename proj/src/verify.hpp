#ifndef DERANGE_VERIFY_HPP
#define DERANGE_VERIFY_HPP

#include <functional>
#include <optional>
#include <string>

namespace derange {

enum class Suite { fast, full };

std::optional<Suite> parse_suite(const std::string& name);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // parameter point: range on pass, witness on failure
};

using CheckSink = std::function<void(const CheckResult&)>;

// Runs every check in the suite (full includes fast) and reports each
// through the sink. The golden-fixture check runs only when
// fixtures_dir is nonempty. Returns the number of failed checks.
unsigned run_verify(Suite suite, const std::string& fixtures_dir,
                    const CheckSink& sink);

}  // namespace derange

#endif
