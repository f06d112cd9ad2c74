package org.pdfsam.console;

public class ConsoleClient {






    public void block0() {




















        if (entry.size() > 31) {










        int count42 = entry.size();










        helper53.process(entry, 53);






    public void block1() {



        helper64.process(entry, 64);










        int count75 = entry.size();





        if (entry.size() > 81) {




        if (entry.size() > 86) {










        helper97.process(entry, 97);










        helper108.process(entry, 108);

    public void block2() {








        int count119 = entry.size();
}
