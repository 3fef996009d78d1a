// Copyright 2026 The Pufferfish Calibration Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pufferfish/csv.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace pufferfish {
namespace {

using ::testing::ElementsAre;

TEST(ParseCsvLineTest, QuotesAndTrim) {
  EXPECT_THAT(*ParseCsvLine(R"(a, "b,c" ,"say ""hi""",)", ',', true),
              ElementsAre("a", "b,c", "say \"hi\"", ""));
  EXPECT_THAT(*ParseCsvLine(" x ;y", ';', false), ElementsAre(" x ", "y"));
  EXPECT_FALSE(ParseCsvLine(R"(a,"unterminated)", ',', true).ok());
}

TEST(EscapeCsvCellTest, QuotesWhenNeeded) {
  EXPECT_EQ(EscapeCsvCell("plain"), "plain");
  EXPECT_EQ(EscapeCsvCell("a,b"), "\"a,b\"");
  EXPECT_EQ(EscapeCsvCell("a;b", ';'), "\"a;b\"");
  EXPECT_EQ(EscapeCsvCell("q\"x"), "\"q\"\"x\"");
}

TEST(CsvRoundTripTest, WriteThenRead) {
  const std::string path = (std::filesystem::temp_directory_path() /
                            ("csv_rt_" + std::to_string(::getpid()) + ".csv"))
                               .string();
  CsvTable table;
  table.header = {"name", "value"};
  table.rows = {{"a,b", "1"}, {"c \"q\"", "2"}};
  ASSERT_TRUE(WriteCsv(path, table).ok());
  auto read = ReadCsv(path);
  ASSERT_TRUE(read.ok()) << read.status();
  EXPECT_EQ(read->header, table.header);
  EXPECT_EQ(read->rows, table.rows);
  EXPECT_EQ(read->ColumnIndex("value"), 1u);
  EXPECT_FALSE(read->ColumnIndex("missing").has_value());
  std::filesystem::remove(path);
}

TEST(ReadCsvTest, RaggedRowsAndMissingFile) {
  const std::string path = (std::filesystem::temp_directory_path() /
                            ("csv_bad_" + std::to_string(::getpid()) + ".csv"))
                               .string();
  {
    std::ofstream out(path);
    out << "\xEF\xBB\xBF" "a,b\r\n1,2\r\n\r\n3\r\n";
  }
  auto read = ReadCsv(path);
  EXPECT_FALSE(read.ok());
  EXPECT_THAT(read.status().message(), ::testing::HasSubstr(":4:"));
  std::filesystem::remove(path);
  EXPECT_EQ(ReadCsv("/nonexistent.csv").status().code(),
            absl::StatusCode::kNotFound);
}

}  // namespace
}  // namespace pufferfish
