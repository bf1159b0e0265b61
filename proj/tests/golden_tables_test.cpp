/*
 * Copyright (c) 2026, The locke-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

// One test per table cell, STRICT lookups against the hand transcription.

#include <gtest/gtest.h>

#include "support.hpp"

namespace locke {
namespace {

using testing::GoldenCell;

const std::vector<GoldenCell>& golden() {
  static const auto cells = testing::load_golden(LOCKE_GOLDEN_DIR "/tables_strict.txt");
  return cells;
}

class GoldenCellTest : public ::testing::TestWithParam<GoldenCell> {};

TEST_P(GoldenCellTest, StrictLookupMatches) {
  const GoldenCell& c = GetParam();
  EXPECT_EQ(testing::lookup_text(c, TableMode::kStrict), c.text)
      << c.table << "," << c.state << "," << c.event;
}

std::string cell_name(const ::testing::TestParamInfo<GoldenCell>& info) {
  return info.param.table + "_" + info.param.state + "_" + info.param.event;
}

INSTANTIATE_TEST_SUITE_P(Tables, GoldenCellTest, ::testing::ValuesIn(golden()), cell_name);

TEST(GoldenFile, CoversBothTables) {
  int l1 = 0;
  int l2 = 0;
  for (const GoldenCell& c : golden()) (c.table == "L1" ? l1 : l2)++;
  EXPECT_EQ(l1, 168);
  EXPECT_EQ(l2, 90);
}

TEST(GoldenFile, DumpIsTheSameText) {
  std::string expected;
  for (const GoldenCell& c : golden()) {
    expected += c.table + "," + c.state + "," + c.event + " \xE2\x86\x92 " + c.text + "\n";
  }
  EXPECT_EQ(dump_tables(TableMode::kStrict), expected);
}

}  // namespace
}  // namespace locke
