// SPDX-License-Identifier: Apache-2.0
//
// fadelab: statistics of fading channels with multiple specular components
// Copyright (C) 2026 The fadelab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// fadelab command-line tool.
// Exit codes: 0 success, 1 verify gate failed, 2 configuration error, 3 numeric failure.

#include "fadelab/cli.hpp"

#include <fstream>
#include <iostream>

namespace
{
enum ExitCode
{
    ok = 0,
    verify_failed = 1,
    bad_config = 2,
    numeric_failure = 3
};

int emit(const std::string &text, const std::string &path)
{
    if (path.empty() || path == "-")
    {
        std::cout << text << std::flush;
        return std::cout ? ok : numeric_failure;
    }
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os)
    {
        std::cerr << "fadelab: error: output: cannot write " << path << '\n';
        return bad_config;
    }
    return ok;
}
} // namespace

int main(int argc, char **argv)
{
    using namespace fadelab;
    cli::RunConfig cfg;
    try
    {
        cfg = cli::parse_config(argc, argv);
    }
    catch (const cli::help_requested &h)
    {
        std::cout << h.what();
        return ok;
    }
    catch (const cli::config_error &e)
    {
        std::cerr << "fadelab: error: " << e.what() << '\n';
        return bad_config;
    }

    try
    {
        if (cfg.command == cli::Command::verify)
        {
            const auto rep = cli::run_verify(cfg);
            const int rc = emit(rep.csv, cfg.output);
            return rc != ok ? rc : (rep.passed ? ok : verify_failed);
        }
        return emit(cli::run_curve(cfg), cfg.output);
    }
    catch (const std::exception &e)
    {
        std::cerr << "fadelab: numeric failure: " << e.what() << '\n';
        return numeric_failure;
    }
}
