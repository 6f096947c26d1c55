#include "eeht/model.hpp"

#include <gtest/gtest.h>

namespace {

// Every subproblem solved anywhere in the process must satisfy strong
// duality and v* ≤ 1e-9.
class DualityAuditEnvironment : public ::testing::Environment {
 public:
  void TearDown() override {
    const auto audit = eeht::model::duality_audit();
    EXPECT_EQ(audit.gap_violations, 0u) << "max relative gap " << audit.max_relative_gap;
    EXPECT_EQ(audit.sign_violations, 0u) << "max v* " << audit.max_v_star;
  }
};

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::AddGlobalTestEnvironment(new DualityAuditEnvironment);
  return RUN_ALL_TESTS();
}
