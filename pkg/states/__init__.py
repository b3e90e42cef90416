# 參考態與廣義隨機純態
