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

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_util.h"
#include "subpiece/processor.h"
#include "subpiece/string_util.h"

int main(int argc, char** argv) {
  using namespace subpiece;
  std::string model_path;
  std::string output_format = "piece";
  std::string extra_options;
  std::string input_path;

  CLI::App app("Encodes raw text, one sentence per line, into pieces or ids.",
               "spm_encode");
  app.add_option("--model", model_path, "Model file")->required();
  app.add_option("--output_format", output_format, "piece or id")
      ->check(CLI::IsMember({"piece", "id"}));
  app.add_option("--extra_options", extra_options,
                 "Colon separated: bos, eos (e.g. bos:eos)");
  app.add_option("--input", input_path, "Input file (default: stdin)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  bool add_bos = false;
  bool add_eos = false;
  if (!extra_options.empty()) {
    for (std::string_view option : SplitString(extra_options, ':')) {
      if (option == "bos") {
        add_bos = true;
      } else if (option == "eos") {
        add_eos = true;
      } else {
        std::cerr << "spm_encode: unknown extra option \"" << option << "\"\n";
        return cli::kExitUsage;
      }
    }
  }

  auto processor = Processor::Load(model_path);
  if (!processor.ok()) {
    return cli::Fail("spm_encode", processor.status(),
                     cli::ModelLoadExitCode(processor.status()));
  }
  const Vocabulary& vocab = processor->vocab();
  if ((add_bos && vocab.bos_id() < 0) || (add_eos && vocab.eos_id() < 0)) {
    std::cerr << "spm_encode: the model has no <s>/</s> symbol\n";
    return cli::kExitUsage;
  }

  std::ifstream file;
  if (!input_path.empty()) {
    file.open(input_path, std::ios::binary);
    if (!file) {
      std::cerr << "spm_encode: cannot open \"" << input_path << "\"\n";
      return cli::kExitIo;
    }
  }
  std::istream& in = input_path.empty() ? std::cin : file;
  std::ios::sync_with_stdio(false);

  int exit_code = cli::kExitOk;
  std::string line;
  std::string out;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    out.clear();
    auto append = [&out](std::string_view token) {
      if (!out.empty()) out.push_back(' ');
      out.append(token);
    };
    if (output_format == "id") {
      auto ids = processor->EncodeAsIds(line);
      if (!ids.ok()) {
        std::cerr << "spm_encode: line " << line_no << ": "
                  << ids.status().message() << "\n";
        exit_code = cli::kExitInput;
      } else {
        if (add_bos) append(std::to_string(vocab.bos_id()));
        for (int id : *ids) append(std::to_string(id));
        if (add_eos) append(std::to_string(vocab.eos_id()));
      }
    } else {
      auto pieces = processor->EncodeAsPieces(line);
      if (!pieces.ok()) {
        std::cerr << "spm_encode: line " << line_no << ": "
                  << pieces.status().message() << "\n";
        exit_code = cli::kExitInput;
      } else {
        if (add_bos) append(vocab.specials().bos_piece);
        for (const auto& piece : *pieces) append(piece);
        if (add_eos) append(vocab.specials().eos_piece);
      }
    }
    out.push_back('\n');
    std::cout << out;
  }
  std::cout.flush();
  return exit_code;
}
