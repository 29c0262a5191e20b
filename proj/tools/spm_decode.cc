// Copyright 2026 The Subpiece Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_util.h"
#include "subpiece/processor.h"
#include "subpiece/string_util.h"

namespace {

// Splits on single spaces, skipping empty fields.
std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  for (std::string_view token : subpiece::SplitString(line, ' ')) {
    if (!token.empty()) tokens.push_back(token);
  }
  return tokens;
}

bool ParseId(std::string_view token, int* id) {
  const auto [end, ec] =
      std::from_chars(token.data(), token.data() + token.size(), *id);
  return ec == std::errc() && end == token.data() + token.size();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace subpiece;
  std::string model_path;
  std::string input_format = "piece";
  std::string input_path;

  CLI::App app("Decodes pieces or ids, one sentence per line, back into text.",
               "spm_decode");
  app.add_option("--model", model_path, "Model file")->required();
  app.add_option("--input_format", input_format, "piece or id")
      ->check(CLI::IsMember({"piece", "id"}));
  app.add_option("--input", input_path, "Input file (default: stdin)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  auto processor = Processor::Load(model_path);
  if (!processor.ok()) {
    return cli::Fail("spm_decode", processor.status(),
                     cli::ModelLoadExitCode(processor.status()));
  }

  std::ifstream file;
  if (!input_path.empty()) {
    file.open(input_path, std::ios::binary);
    if (!file) {
      std::cerr << "spm_decode: cannot open \"" << input_path << "\"\n";
      return cli::kExitIo;
    }
  }
  std::istream& in = input_path.empty() ? std::cin : file;
  std::ios::sync_with_stdio(false);

  int exit_code = cli::kExitOk;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string_view> tokens = Tokens(line);
    std::string text;
    if (input_format == "id") {
      std::vector<int> ids;
      bool ok = true;
      for (std::string_view token : tokens) {
        int id = 0;
        if (!ParseId(token, &id)) {
          std::cerr << "spm_decode: line " << line_no << ": \"" << token
                    << "\" is not an integer id\n";
          ok = false;
          break;
        }
        ids.push_back(id);
      }
      if (ok) {
        auto decoded = processor->DecodeIds(ids);
        if (decoded.ok()) {
          text = *std::move(decoded);
        } else {
          std::cerr << "spm_decode: line " << line_no << ": "
                    << decoded.status().message() << "\n";
          ok = false;
        }
      }
      if (!ok) exit_code = cli::kExitInput;
    } else {
      const std::vector<std::string> pieces(tokens.begin(), tokens.end());
      text = processor->DecodePieces(pieces);
    }
    text.push_back('\n');
    std::cout << text;
  }
  std::cout.flush();
  return exit_code;
}
