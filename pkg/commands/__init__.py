# 命令列子命令；每個模組定義一個 Command 類別
