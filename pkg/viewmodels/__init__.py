# ViewModels package for CausalLab
