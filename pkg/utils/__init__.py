# Utils package for CausalLab
