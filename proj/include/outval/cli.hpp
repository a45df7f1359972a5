#pragma once

namespace outval
{

/// Entry point of the `outval` command. Returns 0 on success, 1 on runtime
/// errors and 2 on configuration or input errors.
int cli_main(int argc, char** argv);

}  // namespace outval
