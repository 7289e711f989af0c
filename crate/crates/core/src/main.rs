// SPDX-License-Identifier: Apache-2.0
use std::io::{stderr, stdout};

fn main() {
    let code = cubic_shapes::cli_harness::run(std::env::args_os(), Box::new(stdout().lock()), &mut stderr());
    std::process::exit(code);
}
