// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cli.h"

int main(int argc, char** argv) { return discogan::cli::cli_dispatch(argc, argv); }
