#include <iostream>

#include "sc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        sc::run_config cfg = sc::parse_cli(args);
        return sc::run(cfg);
    } catch (const sc::cli_help& h) {
        std::cout << h.text;
        return 0;
    } catch (const sc::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const sc::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const sc::not_cptp_error& e) {
        std::cerr << "channel error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
