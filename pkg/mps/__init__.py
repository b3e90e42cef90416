# 矩陣乘積態核心模組
