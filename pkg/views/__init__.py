# Views package for CausalLab
