// Serves a scripted chat-completions endpoint until stdin closes.
#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "tabqa/testkit/mock_server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scripted chat-completions mock endpoint"};
  std::string script;
  int port = 0;
  app.add_option("--script", script, "Rules JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--port", port, "Port to bind on 127.0.0.1 (0 picks one)");
  CLI11_PARSE(app, argc, argv);

  try {
    auto rules = tabqa::testkit::rules_from_json(tabqa::json::parse(tabqa::read_file(script)));
    tabqa::testkit::MockChatServer server(std::move(rules));
    server.start(port);
    std::cout << server.base_url() << std::endl;
    std::string line;
    while (std::getline(std::cin, line)) {
    }
    server.stop();
  } catch (const std::exception& e) {
    std::cerr << "tabqa-mock: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
