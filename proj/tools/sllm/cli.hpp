#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sllm/derivation.hpp"
#include "sllm/shape.hpp"
#include "sllm/tensor.hpp"

namespace sllm::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Raised for failures that map to exit code 1: unprovable sequents, shape
/// mismatches, invalid derivations.
class DomainFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct DemoOptions {
    std::string name;
    std::string data_dir;
    AtomDims dims{{"n", 2}, {"s", 2}};
    int k0 = 2;
    int depth = 40;
};

struct DemoResult {
    std::string sentence;
    Sequent sequent;
    Derivation derivation;
    TensorValue meaning;
};

const std::vector<std::string>& demo_names();

/// Directory of the bundled demo lexicons; SLLM_DEMO_DIR overrides the
/// compiled-in default.
std::string default_demo_dir();

DemoResult run_demo(const DemoOptions& options);

}  // namespace sllm::cli
