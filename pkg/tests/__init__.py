# Test package for agentic-travel
