# 張量代數、配置、日誌與錯誤處理核心模組
