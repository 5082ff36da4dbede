# Models package for CausalLab
