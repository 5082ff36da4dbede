# Services package for CausalLab
